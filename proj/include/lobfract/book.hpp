#pragma once

#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "lobfract/events.hpp"

namespace lobfract {

enum class EventKind : std::uint8_t { ORDER = 0, TRADE = 1, CANCEL = 2 };

inline const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::ORDER: return "ORDER";
        case EventKind::TRADE: return "TRADE";
        case EventKind::CANCEL: return "CANCEL";
    }
    return "?";
}

/// Book-level notification emitted while replaying a day. `at_best` is
/// evaluated against the same-side best immediately before the event is
/// applied. `lifetime_ms` is present for TRADE/CANCEL only and measures
/// time since the referenced order's submission.
struct ClassifiedEvent {
    std::int64_t timestamp_ms = 0;
    EventKind kind = EventKind::ORDER;
    Side side = Side::BID;
    bool at_best = false;
    std::uint64_t order_id = 0;
    std::optional<std::int64_t> lifetime_ms;
    bool from_delete = false; // CANCEL that originated from a DELETE message

    bool operator==(const ClassifiedEvent&) const = default;
};

struct LiveOrder {
    Side side = Side::BID;
    std::int64_t price_ticks = 0;
    std::int64_t remaining = 0;
    std::int64_t submit_ts = 0;
};

/// Full-depth limit-order-book state: price-aggregated ladders plus a
/// registry of live orders for lifetime tracking.
class BookState {
  public:
    using Ladder = std::map<std::int64_t, std::int64_t>;

    const Ladder& bid_ladder() const { return bids_; }
    const Ladder& ask_ladder() const { return asks_; }
    const std::unordered_map<std::uint64_t, LiveOrder>& live_orders() const { return orders_; }

    std::optional<std::int64_t> best_bid() const {
        if (bids_.empty()) return std::nullopt;
        return bids_.rbegin()->first;
    }
    std::optional<std::int64_t> best_ask() const {
        if (asks_.empty()) return std::nullopt;
        return asks_.begin()->first;
    }

    ClassifiedEvent apply_event(const EventRecord& ev) {
        switch (ev.type) {
            case EventType::ADD: return apply_add(ev);
            case EventType::EXECUTE: return apply_remove(ev, EventKind::TRADE, false, false);
            case EventType::CANCEL: return apply_remove(ev, EventKind::CANCEL, false, false);
            case EventType::DELETE: return apply_remove(ev, EventKind::CANCEL, true, true);
        }
        throw Error("unreachable event type");
    }

  private:
    ClassifiedEvent apply_add(const EventRecord& ev) {
        if (orders_.count(ev.order_id))
            throw DuplicateAdd("order " + std::to_string(ev.order_id) + " already live");
        if (ev.side == Side::BID) {
            if (auto ba = best_ask(); ba && ev.price_ticks >= *ba)
                throw CrossedBook("bid at " + std::to_string(ev.price_ticks) + " crosses ask " +
                                  std::to_string(*ba));
        } else {
            if (auto bb = best_bid(); bb && ev.price_ticks <= *bb)
                throw CrossedBook("ask at " + std::to_string(ev.price_ticks) + " crosses bid " +
                                  std::to_string(*bb));
        }
        const bool at_best = price_at_best(ev.side, ev.price_ticks);
        ladder(ev.side)[ev.price_ticks] += ev.quantity;
        orders_.emplace(ev.order_id,
                        LiveOrder{ev.side, ev.price_ticks, ev.quantity, ev.timestamp_ms});
        return {ev.timestamp_ms, EventKind::ORDER, ev.side, at_best, ev.order_id,
                std::nullopt, false};
    }

    ClassifiedEvent apply_remove(const EventRecord& ev, EventKind kind, bool whole_order,
                                 bool from_delete) {
        auto it = orders_.find(ev.order_id);
        if (it == orders_.end())
            throw UnknownOrder("order " + std::to_string(ev.order_id) + " not live");
        LiveOrder& order = it->second;
        const std::int64_t qty = whole_order ? order.remaining : ev.quantity;
        if (qty > order.remaining)
            throw Overfill("quantity " + std::to_string(qty) + " exceeds remaining " +
                           std::to_string(order.remaining) + " of order " +
                           std::to_string(ev.order_id));

        const bool at_best = price_at_best(order.side, order.price_ticks);
        ClassifiedEvent out{ev.timestamp_ms, kind, order.side, at_best, ev.order_id,
                            ev.timestamp_ms - order.submit_ts, from_delete};

        Ladder& lad = ladder(order.side);
        auto lit = lad.find(order.price_ticks);
        lit->second -= qty;
        if (lit->second == 0) lad.erase(lit);
        order.remaining -= qty;
        if (order.remaining == 0) orders_.erase(it);
        return out;
    }

    bool price_at_best(Side side, std::int64_t price) const {
        if (side == Side::BID) {
            auto bb = best_bid();
            return bb && *bb == price;
        }
        auto ba = best_ask();
        return ba && *ba == price;
    }

    Ladder& ladder(Side s) { return s == Side::BID ? bids_ : asks_; }

    Ladder bids_;
    Ladder asks_;
    std::unordered_map<std::uint64_t, LiveOrder> orders_;
};

/// Replay a session-filtered, sorted day from an empty book. Errors from
/// apply_event are rethrown annotated with the offending event index.
inline std::vector<ClassifiedEvent> replay_day(const std::vector<EventRecord>& events,
                                               BookState* final_state = nullptr) {
    BookState book;
    std::vector<ClassifiedEvent> out;
    out.reserve(events.size());
    for (std::size_t i = 0; i < events.size(); ++i) {
        try {
            out.push_back(book.apply_event(events[i]));
        } catch (const Error& e) {
            throw Error("event " + std::to_string(i) + ": " + e.what());
        }
    }
    if (final_state) *final_state = std::move(book);
    return out;
}

} // namespace lobfract
