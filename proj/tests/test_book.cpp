#include <catch2/catch_amalgamated.hpp>

#include "lobfract/book.hpp"

#include "fixtures.hpp"

using namespace lobfract;

TEST_CASE("first order on an empty side is not at_best") {
    BookState book;
    const auto ev = book.apply_event({1000, EventType::ADD, 1, Side::BID, 100, 50});
    CHECK(ev.kind == EventKind::ORDER);
    CHECK_FALSE(ev.at_best);
    CHECK(ev.lifetime_ms == std::nullopt);
    REQUIRE(book.best_bid());
    CHECK(*book.best_bid() == 100);
}

TEST_CASE("cancel at the best level carries the order lifetime") {
    BookState book;
    book.apply_event({34200100, EventType::ADD, 1, Side::BID, 100, 50});
    const auto ev = book.apply_event({34200500, EventType::CANCEL, 1, Side::BID, 100, 50});
    CHECK(ev.kind == EventKind::CANCEL);
    CHECK(ev.at_best);
    REQUIRE(ev.lifetime_ms);
    CHECK(*ev.lifetime_ms == 400);
    CHECK(book.bid_ladder().empty());
    CHECK_FALSE(book.best_bid());
}

TEST_CASE("removal of an unknown order fails") {
    BookState book;
    CHECK_THROWS_AS(book.apply_event({100, EventType::EXECUTE, 9, Side::BID, 10, 1}),
                    UnknownOrder);
}

TEST_CASE("overfill and crossing are rejected") {
    BookState book;
    book.apply_event({100, EventType::ADD, 1, Side::BID, 100, 10});
    CHECK_THROWS_AS(book.apply_event({200, EventType::EXECUTE, 1, Side::BID, 100, 11}), Overfill);
    book.apply_event({300, EventType::ADD, 2, Side::ASK, 105, 10});
    CHECK_THROWS_AS(book.apply_event({400, EventType::ADD, 3, Side::BID, 105, 5}), CrossedBook);
    CHECK_THROWS_AS(book.apply_event({400, EventType::ADD, 3, Side::ASK, 100, 5}), CrossedBook);
    CHECK_THROWS_AS(book.apply_event({500, EventType::ADD, 1, Side::BID, 90, 5}), DuplicateAdd);
}

TEST_CASE("partial executions emit one trade each, measured from submission") {
    BookState book;
    book.apply_event({100, EventType::ADD, 1, Side::ASK, 105, 30});
    const auto first = book.apply_event({200, EventType::EXECUTE, 1, Side::ASK, 105, 10});
    CHECK(*first.lifetime_ms == 100);
    CHECK(book.live_orders().at(1).remaining == 20);
    const auto second = book.apply_event({500, EventType::EXECUTE, 1, Side::ASK, 105, 20});
    CHECK(*second.lifetime_ms == 400);
    CHECK(book.live_orders().empty());
}

TEST_CASE("DELETE removes the whole order and emits a flagged CANCEL") {
    BookState book;
    book.apply_event({100, EventType::ADD, 1, Side::ASK, 105, 30});
    const auto ev = book.apply_event({700, EventType::DELETE, 1, Side::ASK, 105, 0});
    CHECK(ev.kind == EventKind::CANCEL);
    CHECK(ev.from_delete);
    CHECK(*ev.lifetime_ms == 600);
    CHECK(book.ask_ladder().empty());
}

TEST_CASE("golden six-event day reproduces the hand trace") {
    const auto classified = replay_day(testing::golden_day_events());
    CHECK(classified == testing::golden_day_classified());
}

TEST_CASE("replay of an empty day is empty") { CHECK(replay_day({}).empty()); }

TEST_CASE("replay errors carry the event index") {
    std::vector<EventRecord> events = {
        {100, EventType::ADD, 1, Side::BID, 100, 10},
        {200, EventType::EXECUTE, 2, Side::BID, 100, 5},
    };
    try {
        replay_day(events);
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("event 1") != std::string::npos);
    }
}

TEST_CASE("randomized replays preserve the book invariants") {
    for (std::uint64_t seed = 10; seed < 14; ++seed) {
        const auto events = testing::random_valid_stream(3000, seed);
        BookState book;
        std::size_t orders = 0, removals = 0, adds = 0;
        for (const auto& e : events) {
            const auto ev = book.apply_event(e);
            testing::check_book_invariants(book);
            if (ev.kind == EventKind::ORDER) ++orders;
            if (ev.lifetime_ms) {
                CHECK(*ev.lifetime_ms >= 0);
                if (book.live_orders().find(e.order_id) == book.live_orders().end()) ++removals;
            }
            if (e.type == EventType::ADD) ++adds;
        }
        CHECK(orders == adds);
        CHECK(removals <= orders);
    }
}
