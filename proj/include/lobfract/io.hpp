#pragma once

#include <charconv>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "lobfract/events.hpp"

namespace lobfract {

inline constexpr char kCsvHeader[] = "timestamp,event_type,order_id,side,price,quantity";
inline constexpr char kBinaryMagic[8] = {'L', 'O', 'B', 'F', '0', '0', '0', '1'};
inline constexpr std::size_t kBinaryRecordSize = 22;

namespace detail {

inline std::string_view trim_cr(std::string_view s) {
    if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
    return s;
}

template <typename Int>
inline bool parse_int(std::string_view s, Int& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

inline bool parse_event_type(std::string_view s, EventType& out) {
    if (s == "ADD") out = EventType::ADD;
    else if (s == "EXECUTE") out = EventType::EXECUTE;
    else if (s == "CANCEL") out = EventType::CANCEL;
    else if (s == "DELETE") out = EventType::DELETE;
    else return false;
    return true;
}

inline bool parse_side(std::string_view s, Side& out) {
    if (s == "BID") out = Side::BID;
    else if (s == "ASK") out = Side::ASK;
    else return false;
    return true;
}

// Checks shared by the CSV and binary readers: timestamp range and
// monotonicity, quantity positivity, no re-used ADD ids within a day.
class RecordValidator {
  public:
    void check(const EventRecord& r, std::size_t record_index) {
        const std::string at = " (record " + std::to_string(record_index) + ")";
        if (r.timestamp_ms < 0 || r.timestamp_ms >= kMsPerDay)
            throw MalformedLine("timestamp out of day range" + at);
        if (r.timestamp_ms < last_ts_)
            throw NonMonotoneTimestamp("timestamp decreases" + at);
        last_ts_ = r.timestamp_ms;
        if (r.quantity <= 0 && r.type != EventType::DELETE)
            throw MalformedLine("non-positive quantity" + at);
        if (r.quantity < 0) throw MalformedLine("negative quantity" + at);
        if (r.type == EventType::ADD && !added_.insert(r.order_id).second)
            throw DuplicateAdd("order id " + std::to_string(r.order_id) + " added twice" + at);
    }

  private:
    std::int64_t last_ts_ = 0;
    std::unordered_set<std::uint64_t> added_;
};

} // namespace detail

/// Parse the canonical CSV event log. Header line is required; malformed
/// lines are rejected with 1-based line numbers in the message.
inline std::vector<EventRecord> parse_csv_log(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || detail::trim_cr(line) != kCsvHeader)
        throw MalformedLine("missing or bad CSV header (line 1)");

    std::vector<EventRecord> out;
    detail::RecordValidator validator;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv = detail::trim_cr(line);
        if (sv.empty()) continue;

        std::string_view field[6];
        std::size_t nfields = 0, pos = 0;
        while (nfields < 6) {
            std::size_t comma = sv.find(',', pos);
            if (comma == std::string_view::npos) {
                field[nfields++] = sv.substr(pos);
                pos = sv.size();
                break;
            }
            field[nfields++] = sv.substr(pos, comma - pos);
            pos = comma + 1;
        }
        const std::string at = " (line " + std::to_string(lineno) + ")";
        if (nfields != 6 || pos != sv.size())
            throw MalformedLine("expected 6 fields" + at);

        EventRecord r;
        if (!detail::parse_int(field[0], r.timestamp_ms))
            throw MalformedLine("bad timestamp" + at);
        if (!detail::parse_event_type(field[1], r.type))
            throw MalformedLine("bad event_type" + at);
        if (!detail::parse_int(field[2], r.order_id))
            throw MalformedLine("bad order_id" + at);
        if (!detail::parse_side(field[3], r.side))
            throw MalformedLine("bad side" + at);
        if (!detail::parse_int(field[4], r.price_ticks))
            throw MalformedLine("bad price" + at);
        if (!detail::parse_int(field[5], r.quantity))
            throw MalformedLine("bad quantity" + at);
        validator.check(r, lineno);
        out.push_back(r);
    }
    return out;
}

inline void write_csv_log(std::ostream& out, const std::vector<EventRecord>& events) {
    out << kCsvHeader << '\n';
    for (const auto& e : events) {
        out << e.timestamp_ms << ',' << to_string(e.type) << ',' << e.order_id << ','
            << to_string(e.side) << ',' << e.price_ticks << ',' << e.quantity << '\n';
    }
}

namespace detail {

template <typename Int>
inline void put_le(std::string& buf, Int v) {
    for (std::size_t i = 0; i < sizeof(Int); ++i)
        buf.push_back(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff));
}

template <typename Int>
inline Int get_le(const char* p) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(Int); ++i)
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
    return static_cast<Int>(v);
}

} // namespace detail

/// Encode to the compact binary log: 8-byte magic, then fixed 22-byte
/// little-endian records (u32 ts, u8 type, u64 id, u8 side, u32 price, u32 qty).
inline void encode_binary_log(std::ostream& out, const std::vector<EventRecord>& events) {
    out.write(kBinaryMagic, sizeof(kBinaryMagic));
    std::string buf;
    buf.reserve(events.size() * kBinaryRecordSize);
    for (const auto& e : events) {
        detail::put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(e.timestamp_ms));
        buf.push_back(static_cast<char>(e.type));
        detail::put_le<std::uint64_t>(buf, e.order_id);
        buf.push_back(static_cast<char>(e.side));
        detail::put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(e.price_ticks));
        detail::put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(e.quantity));
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

inline std::vector<EventRecord> parse_binary_log(std::istream& in) {
    std::string data(std::istreambuf_iterator<char>(in), {});
    if (data.size() < sizeof(kBinaryMagic) ||
        std::memcmp(data.data(), kBinaryMagic, sizeof(kBinaryMagic)) != 0)
        throw BadMagic("binary log magic mismatch");
    const std::size_t payload = data.size() - sizeof(kBinaryMagic);
    if (payload % kBinaryRecordSize != 0)
        throw TruncatedRecord("binary log payload is not a multiple of the record size");

    std::vector<EventRecord> out;
    out.reserve(payload / kBinaryRecordSize);
    detail::RecordValidator validator;
    const char* p = data.data() + sizeof(kBinaryMagic);
    for (std::size_t i = 0; i < payload / kBinaryRecordSize; ++i, p += kBinaryRecordSize) {
        EventRecord r;
        r.timestamp_ms = detail::get_le<std::uint32_t>(p);
        const auto type = static_cast<std::uint8_t>(p[4]);
        const auto side = static_cast<std::uint8_t>(p[13]);
        if (type > 3) throw MalformedLine("bad event_type byte (record " + std::to_string(i) + ")");
        if (side > 1) throw MalformedLine("bad side byte (record " + std::to_string(i) + ")");
        r.type = static_cast<EventType>(type);
        r.order_id = detail::get_le<std::uint64_t>(p + 5);
        r.side = static_cast<Side>(side);
        r.price_ticks = detail::get_le<std::uint32_t>(p + 14);
        r.quantity = detail::get_le<std::uint32_t>(p + 18);
        validator.check(r, i);
        out.push_back(r);
    }
    return out;
}

} // namespace lobfract
