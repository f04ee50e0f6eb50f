#pragma once

#include <random>
#include <vector>

#include "lobfract/book.hpp"
#include "lobfract/io.hpp"

namespace lobfract::testing {

/// Six-event hand-traced day: 2 ADD, 1 EXECUTE, 1 CANCEL, 2 ADD.
inline std::vector<EventRecord> golden_day_events() {
    return {
        {34200000, EventType::ADD, 1, Side::BID, 100, 50},
        {34200100, EventType::ADD, 2, Side::ASK, 105, 30},
        {34200200, EventType::EXECUTE, 2, Side::ASK, 105, 30},
        {34200500, EventType::CANCEL, 1, Side::BID, 100, 50},
        {34200600, EventType::ADD, 3, Side::BID, 99, 10},
        {34200700, EventType::ADD, 4, Side::BID, 99, 20},
    };
}

/// Expected classified stream for golden_day_events, traced by hand:
/// order 2 executes 100 ms after submission at the best ask; order 1 is
/// canceled at the best bid after 500 ms; order 4 joins the best bid.
inline std::vector<ClassifiedEvent> golden_day_classified() {
    return {
        {34200000, EventKind::ORDER, Side::BID, false, 1, std::nullopt, false},
        {34200100, EventKind::ORDER, Side::ASK, false, 2, std::nullopt, false},
        {34200200, EventKind::TRADE, Side::ASK, true, 2, 100, false},
        {34200500, EventKind::CANCEL, Side::BID, true, 1, 500, false},
        {34200600, EventKind::ORDER, Side::BID, false, 3, std::nullopt, false},
        {34200700, EventKind::ORDER, Side::BID, true, 4, std::nullopt, false},
    };
}

/// Random but always-valid event stream: ADDs never cross, removals
/// reference live orders and never overfill.
inline std::vector<EventRecord> random_valid_stream(std::size_t n_events, std::uint64_t seed,
                                                    std::int64_t t0 = 30000000) {
    std::mt19937_64 rng(seed);
    std::vector<EventRecord> out;
    out.reserve(n_events);
    BookState book; // shadow book used only to generate legal events
    std::vector<std::uint64_t> live;
    std::uint64_t next_id = 1;
    std::int64_t t = t0;
    std::uniform_int_distribution<int> dt(0, 400);
    std::uniform_int_distribution<std::int64_t> qty(1, 500);

    for (std::size_t i = 0; i < n_events; ++i) {
        t += dt(rng);
        const int action = live.empty() ? 0 : static_cast<int>(rng() % 10);
        if (action < 5) { // ADD
            const Side side = (rng() & 1) ? Side::BID : Side::ASK;
            std::int64_t price;
            if (side == Side::BID) {
                const auto ba = book.best_ask();
                const std::int64_t hi = ba ? *ba - 1 : 10000;
                price = hi - static_cast<std::int64_t>(rng() % 20);
            } else {
                const auto bb = book.best_bid();
                const std::int64_t lo = bb ? *bb + 1 : 10001;
                price = lo + static_cast<std::int64_t>(rng() % 20);
            }
            EventRecord e{t, EventType::ADD, next_id++, side, price, qty(rng)};
            book.apply_event(e);
            live.push_back(e.order_id);
            out.push_back(e);
        } else {
            const std::size_t pick = rng() % live.size();
            const std::uint64_t id = live[pick];
            const LiveOrder& ord = book.live_orders().at(id);
            EventType type;
            if (action < 7) type = EventType::EXECUTE;
            else if (action < 9) type = EventType::CANCEL;
            else type = EventType::DELETE;
            std::int64_t q = ord.remaining;
            if (type != EventType::DELETE && ord.remaining > 1 && (rng() & 1))
                q = 1 + static_cast<std::int64_t>(rng() % ord.remaining);
            EventRecord e{t, type, id, ord.side, ord.price_ticks, q};
            book.apply_event(e);
            if (book.live_orders().find(id) == book.live_orders().end()) {
                live[pick] = live.back();
                live.pop_back();
            }
            out.push_back(e);
        }
    }
    return out;
}

/// Ladder-sum, best-price and uncrossed-book invariants.
inline void check_book_invariants(const BookState& book) {
    std::map<std::int64_t, std::int64_t> bid_sums, ask_sums;
    for (const auto& [id, ord] : book.live_orders())
        (ord.side == Side::BID ? bid_sums : ask_sums)[ord.price_ticks] += ord.remaining;
    if (bid_sums != std::map<std::int64_t, std::int64_t>(book.bid_ladder().begin(),
                                                         book.bid_ladder().end()))
        throw std::logic_error("bid ladder does not equal live-order sums");
    if (ask_sums != std::map<std::int64_t, std::int64_t>(book.ask_ladder().begin(),
                                                         book.ask_ladder().end()))
        throw std::logic_error("ask ladder does not equal live-order sums");
    const auto bb = book.best_bid();
    const auto ba = book.best_ask();
    if (bb.has_value() != !book.bid_ladder().empty() ||
        ba.has_value() != !book.ask_ladder().empty())
        throw std::logic_error("best presence disagrees with ladder emptiness");
    if (bb && *bb != book.bid_ladder().rbegin()->first)
        throw std::logic_error("best_bid is not the max bid level");
    if (ba && *ba != book.ask_ladder().begin()->first)
        throw std::logic_error("best_ask is not the min ask level");
    if (bb && ba && *bb >= *ba) throw std::logic_error("crossed book");
}

} // namespace lobfract::testing
