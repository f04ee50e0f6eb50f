#pragma once

#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "lobfract/book.hpp"

namespace lobfract {

enum class Variable : std::uint8_t { OR_OR = 0, TR_TR = 1, CA_CA = 2, OR_TR = 3, OR_CA = 4 };

inline constexpr Variable kAllVariables[] = {Variable::OR_OR, Variable::TR_TR, Variable::CA_CA,
                                             Variable::OR_TR, Variable::OR_CA};

inline const char* to_string(Variable v) {
    switch (v) {
        case Variable::OR_OR: return "or-or";
        case Variable::TR_TR: return "tr-tr";
        case Variable::CA_CA: return "ca-ca";
        case Variable::OR_TR: return "or-tr";
        case Variable::OR_CA: return "or-ca";
    }
    return "?";
}

inline bool variable_from_string(const std::string& s, Variable& out) {
    for (Variable v : kAllVariables)
        if (s == to_string(v)) {
            out = v;
            return true;
        }
    return false;
}

inline bool is_lifetime(Variable v) { return v == Variable::OR_TR || v == Variable::OR_CA; }

/// Event kind a variable counts: ORDER for or-or, TRADE for tr-tr and
/// or-tr, CANCEL for ca-ca and or-ca.
inline EventKind variable_kind(Variable v) {
    switch (v) {
        case Variable::OR_OR: return EventKind::ORDER;
        case Variable::TR_TR:
        case Variable::OR_TR: return EventKind::TRADE;
        case Variable::CA_CA:
        case Variable::OR_CA: return EventKind::CANCEL;
    }
    return EventKind::ORDER;
}

/// One day's duration sequence for one (stock, side, variable).
/// Values are integer milliseconds end-to-end.
struct DurationSeries {
    std::string stock_id;
    std::string day; // yyyymmdd
    Side side = Side::BID;
    Variable variable = Variable::OR_OR;
    std::vector<std::int64_t> values;

    std::size_t n() const { return values.size(); }
};

struct ExtractOptions {
    bool best_only_ca_ca = true; // Table II restricts ca-ca to the best level
    bool best_only_or_or = false;
    bool best_only_tr_tr = false;
    bool drop_zeros = false;
    bool deletes_are_cancels = true;

    bool best_only(Variable v) const {
        switch (v) {
            case Variable::OR_OR: return best_only_or_or;
            case Variable::TR_TR: return best_only_tr_tr;
            case Variable::CA_CA: return best_only_ca_ca;
            default: return false;
        }
    }
};

namespace detail {

inline bool event_qualifies(const ClassifiedEvent& e, EventKind kind, Side side, bool best_only,
                            bool deletes_are_cancels) {
    if (e.kind != kind || e.side != side) return false;
    if (best_only && !e.at_best) return false;
    if (e.kind == EventKind::CANCEL && e.from_delete && !deletes_are_cancels) return false;
    return true;
}

inline void maybe_drop_zeros(std::vector<std::int64_t>& values, bool drop) {
    if (drop) std::erase(values, 0);
}

} // namespace detail

/// Consecutive timestamp differences between qualifying events of one kind.
/// Fewer than two qualifying events yields an empty series.
inline DurationSeries inter_event_durations(const std::vector<ClassifiedEvent>& events,
                                            EventKind kind, Side side, bool best_only,
                                            const ExtractOptions& opt = {}) {
    DurationSeries s;
    s.side = side;
    std::int64_t prev = -1;
    for (const auto& e : events) {
        if (!detail::event_qualifies(e, kind, side, best_only, opt.deletes_are_cancels)) continue;
        if (prev >= 0) s.values.push_back(e.timestamp_ms - prev);
        prev = e.timestamp_ms;
    }
    detail::maybe_drop_zeros(s.values, opt.drop_zeros);
    return s;
}

/// Submission-to-terminal lifetimes, ordered by terminal event time.
inline DurationSeries lifetime_durations(const std::vector<ClassifiedEvent>& events,
                                         EventKind terminal, Side side,
                                         const ExtractOptions& opt = {}) {
    DurationSeries s;
    s.side = side;
    for (const auto& e : events) {
        if (!detail::event_qualifies(e, terminal, side, false, opt.deletes_are_cancels)) continue;
        s.values.push_back(*e.lifetime_ms);
    }
    detail::maybe_drop_zeros(s.values, opt.drop_zeros);
    return s;
}

inline DurationSeries extract_variable(const std::vector<ClassifiedEvent>& events, Variable v,
                                       Side side, const ExtractOptions& opt = {}) {
    DurationSeries s = is_lifetime(v)
                           ? lifetime_durations(events, variable_kind(v), side, opt)
                           : inter_event_durations(events, variable_kind(v), side,
                                                   opt.best_only(v), opt);
    s.variable = v;
    return s;
}

/// Day-after-day concatenation; no overnight gap values are inserted
/// (the series is event-indexed). Inputs must agree on stock/side/variable.
inline DurationSeries concat_days(const std::vector<DurationSeries>& days) {
    if (days.empty()) return {};
    DurationSeries out;
    out.stock_id = days.front().stock_id;
    out.side = days.front().side;
    out.variable = days.front().variable;
    out.day = days.front().day;
    for (const auto& d : days) {
        if (d.stock_id != out.stock_id || d.side != out.side || d.variable != out.variable)
            throw MixedKey("concat_days inputs disagree on stock/side/variable");
        out.values.insert(out.values.end(), d.values.begin(), d.values.end());
    }
    return out;
}

inline constexpr char kDurationCsvHeader[] = "stock,day,side,variable,index,duration_ms";

inline void write_duration_csv(std::ostream& out, const DurationSeries& s,
                               bool with_header = true) {
    if (with_header) out << kDurationCsvHeader << '\n';
    for (std::size_t i = 0; i < s.values.size(); ++i)
        out << s.stock_id << ',' << s.day << ',' << to_string(s.side) << ','
            << to_string(s.variable) << ',' << i << ',' << s.values[i] << '\n';
}

inline constexpr char kDurationMagic[8] = {'L', 'O', 'B', 'D', '0', '0', '0', '1'};

/// Compact binary cache format for one DurationSeries.
inline void encode_duration_series(std::ostream& out, const DurationSeries& s) {
    out.write(kDurationMagic, sizeof(kDurationMagic));
    auto put_u32 = [&](std::uint32_t v) {
        char b[4];
        for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
        out.write(b, 4);
    };
    put_u32(static_cast<std::uint32_t>(s.stock_id.size()));
    out.write(s.stock_id.data(), static_cast<std::streamsize>(s.stock_id.size()));
    put_u32(static_cast<std::uint32_t>(s.day.size()));
    out.write(s.day.data(), static_cast<std::streamsize>(s.day.size()));
    char meta[2] = {static_cast<char>(s.side), static_cast<char>(s.variable)};
    out.write(meta, 2);
    put_u32(static_cast<std::uint32_t>(s.values.size()));
    for (std::int64_t v : s.values) put_u32(static_cast<std::uint32_t>(v));
}

inline DurationSeries decode_duration_series(std::istream& in) {
    char magic[8];
    if (!in.read(magic, 8) || std::memcmp(magic, kDurationMagic, 8) != 0)
        throw BadMagic("duration cache magic mismatch");
    auto get_u32 = [&]() -> std::uint32_t {
        char b[4];
        if (!in.read(b, 4)) throw TruncatedRecord("duration cache truncated");
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[i])) << (8 * i);
        return v;
    };
    DurationSeries s;
    s.stock_id.resize(get_u32());
    if (!in.read(s.stock_id.data(), static_cast<std::streamsize>(s.stock_id.size())))
        throw TruncatedRecord("duration cache truncated");
    s.day.resize(get_u32());
    if (!in.read(s.day.data(), static_cast<std::streamsize>(s.day.size())))
        throw TruncatedRecord("duration cache truncated");
    char meta[2];
    if (!in.read(meta, 2)) throw TruncatedRecord("duration cache truncated");
    s.side = static_cast<Side>(meta[0]);
    s.variable = static_cast<Variable>(meta[1]);
    const std::uint32_t count = get_u32();
    s.values.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) s.values.push_back(get_u32());
    return s;
}

} // namespace lobfract
