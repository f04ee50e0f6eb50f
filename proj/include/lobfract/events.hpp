#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lobfract/errors.hpp"

namespace lobfract {

enum class EventType : std::uint8_t { ADD = 0, EXECUTE = 1, CANCEL = 2, DELETE = 3 };
enum class Side : std::uint8_t { BID = 0, ASK = 1 };

constexpr std::int64_t kMsPerDay = 86'400'000;

/// One normalized order-book message. Timestamps are exchange-local
/// milliseconds since midnight; prices are integer ticks.
struct EventRecord {
    std::int64_t timestamp_ms = 0;
    EventType type = EventType::ADD;
    std::uint64_t order_id = 0;
    Side side = Side::BID;
    std::int64_t price_ticks = 0;
    std::int64_t quantity = 0;

    bool operator==(const EventRecord&) const = default;
};

/// Trading-session bounds. `trim` milliseconds are removed at each end,
/// so the retained window is [open + trim, close - trim).
struct SessionWindow {
    std::int64_t open_ms = 0;
    std::int64_t close_ms = kMsPerDay;
    std::int64_t trim_ms = 0;

    std::int64_t lo() const { return open_ms + trim_ms; }
    std::int64_t hi() const { return close_ms - trim_ms; }

    void validate() const {
        if (lo() >= hi())
            throw ConfigError("session window empty: open+trim >= close-trim");
    }

    bool contains(std::int64_t t) const { return t >= lo() && t < hi(); }
};

inline std::vector<EventRecord> apply_session_filter(const std::vector<EventRecord>& events,
                                                     const SessionWindow& window) {
    window.validate();
    std::vector<EventRecord> out;
    out.reserve(events.size());
    for (const auto& e : events)
        if (window.contains(e.timestamp_ms)) out.push_back(e);
    return out;
}

inline const char* to_string(EventType t) {
    switch (t) {
        case EventType::ADD: return "ADD";
        case EventType::EXECUTE: return "EXECUTE";
        case EventType::CANCEL: return "CANCEL";
        case EventType::DELETE: return "DELETE";
    }
    return "?";
}

inline const char* to_string(Side s) { return s == Side::BID ? "BID" : "ASK"; }

} // namespace lobfract
