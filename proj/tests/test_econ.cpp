#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "lobfract/econ.hpp"

#include "fixtures.hpp"

using namespace lobfract;
using Catch::Approx;

TEST_CASE("two-point mid path gives the closed-form realized variance") {
    const SessionWindow window{0, 27000000, 0}; // 7.5 h session
    const std::vector<MidPoint> path = {{0, 100.0}, {13500000, 110.0}};
    const double rv = realized_variance(path, window);
    const double expected = std::log(1.1) * std::log(1.1);
    CHECK(rv == Approx(expected).margin(1e-12));
}

TEST_CASE("constant path has zero realized variance") {
    const SessionWindow window{0, 27000000, 0};
    CHECK(realized_variance({{0, 100.0}}, window) == 0.0);
}

TEST_CASE("realized variance input validation") {
    const SessionWindow window{0, 27000000, 0};
    CHECK_THROWS_AS(realized_variance({}, window), InsufficientPath);
    // path starting after the session end leaves every grid empty
    CHECK_THROWS_AS(realized_variance({{27000001, 1.0}}, window), InsufficientPath);
    CHECK_THROWS_AS(realized_variance({{0, 100.0}}, window, 300, 7), ConfigError);
}

TEST_CASE("realized variance is invariant under price rescaling") {
    const SessionWindow window{0, 27000000, 0};
    std::vector<MidPoint> path;
    std::mt19937_64 rng(3);
    std::normal_distribution<double> gauss(0.0, 0.001);
    double p = 100.0;
    for (std::int64_t t = 0; t < 27000000; t += 60000) {
        p *= std::exp(gauss(rng));
        path.push_back({t, p});
    }
    std::vector<MidPoint> scaled = path;
    for (auto& m : scaled) m.mid *= 7.5;
    CHECK(realized_variance(path, window) ==
          Approx(realized_variance(scaled, window)).epsilon(1e-12));
}

TEST_CASE("random-walk realized variance is consistent with sigma^2 T") {
    const SessionWindow window{0, 27000000, 0};
    const double sigma = 4e-4; // per-second return stdev
    const int seconds = 27000;
    double mean_rv = 0.0;
    const int n_seeds = 20;
    for (int seed = 0; seed < n_seeds; ++seed) {
        std::mt19937_64 rng(100 + seed);
        std::normal_distribution<double> gauss(0.0, sigma);
        std::vector<MidPoint> path;
        path.reserve(seconds);
        double logp = std::log(100.0);
        for (int t = 0; t < seconds; ++t) {
            logp += gauss(rng);
            path.push_back({static_cast<std::int64_t>(t) * 1000, std::exp(logp)});
        }
        mean_rv += realized_variance(path, window);
    }
    mean_rv /= n_seeds;
    const double target = sigma * sigma * seconds;
    CHECK(mean_rv == Approx(target).epsilon(0.15));
}

TEST_CASE("daily economics of the golden fixture") {
    BookState book;
    std::vector<ClassifiedEvent> classified;
    const auto raw = testing::golden_day_events();
    for (const auto& e : raw) classified.push_back(book.apply_event(e));
    DurationSeries s{"FI1", "20100601", Side::BID, Variable::OR_OR, {250, 0, 550}};
    const auto mids = mid_price_path(raw);
    const SessionWindow window{34200000, 34300000, 0};
    const auto econ = daily_economics(s, raw, mids, window, 30, 30);
    CHECK(econ.avg_duration_ms == Approx(800.0 / 3.0));
    CHECK(econ.activity == 3);
    // bid-side ADD quantities: 50, 10, 20
    CHECK(econ.avg_quantity == Approx(80.0 / 3.0));
    // only mid observations come while both sides are quoted: mid 102.5 only
    CHECK(econ.daily_log_return == 0.0);
    CHECK(econ.realized_var == 0.0);
}

TEST_CASE("empty day is rejected") {
    DurationSeries s{"FI1", "20100601", Side::BID, Variable::OR_OR, {}};
    CHECK_THROWS_AS(daily_economics(s, {}, {}, SessionWindow{0, 1000, 0}), EmptyDay);
}

TEST_CASE("perfect linear relation correlates to one") {
    std::vector<double> x, y;
    for (int i = 0; i < 20; ++i) {
        x.push_back(i);
        y.push_back(2.0 * i + 1.0);
    }
    const auto r = correlate(x, y);
    CHECK(r.r == Approx(1.0).margin(1e-12));
    CHECK(r.significant_99);
}

TEST_CASE("correlate input validation") {
    CHECK_THROWS_AS(correlate({1, 2}, {1, 2}), InsufficientData);
    CHECK_THROWS_AS(correlate({1, 2, 3}, {1, 2}), InsufficientData);
    CHECK_THROWS_AS(correlate({1, 1, 1}, {1, 2, 3}), ZeroVariance);
}

TEST_CASE("correlation is invariant under positive affine maps, flips under negation") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> gauss;
    std::vector<double> x(100), y(100);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = gauss(rng);
        y[i] = 0.5 * x[i] + gauss(rng);
    }
    const double base = correlate(x, y).r;
    std::vector<double> xt(x);
    for (auto& v : xt) v = 3.0 * v + 11.0;
    CHECK(correlate(xt, y).r == Approx(base).epsilon(1e-12));
    for (auto& v : xt) v = -v;
    CHECK(correlate(xt, y).r == Approx(-base).epsilon(1e-12));
}

TEST_CASE("critical r matches the standard table value at large n") {
    // two-sided 0.01 critical Pearson r for n=752 is about 0.094
    CHECK(pearson_critical_r(752) == Approx(0.0939).margin(0.0015));
    // and about 0.708 for n=12 (df=10)
    CHECK(pearson_critical_r(12) == Approx(0.708).margin(0.002));
}

TEST_CASE("significance is monotone in |r| at fixed n") {
    const double rc = pearson_critical_r(50);
    CHECK(rc > 0.0);
    CHECK(rc < 1.0);
    std::vector<double> x, y_strong, y_null;
    std::mt19937_64 rng(9);
    std::normal_distribution<double> gauss;
    for (int i = 0; i < 50; ++i) {
        x.push_back(gauss(rng));
        y_strong.push_back(x.back() + 0.1 * gauss(rng));
        y_null.push_back(gauss(rng));
    }
    CHECK(correlate(x, y_strong).significant_99);
    CHECK(std::abs(correlate(x, y_strong).r) > std::abs(correlate(x, y_null).r));
}

TEST_CASE("independent noise is rarely flagged significant") {
    int flagged = 0;
    const int trials = 40;
    for (int t = 0; t < trials; ++t) {
        std::mt19937_64 rng(500 + t);
        std::normal_distribution<double> gauss;
        std::vector<double> x(300), y(300);
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = gauss(rng);
            y[i] = gauss(rng);
        }
        if (correlate(x, y).significant_99) ++flagged;
    }
    CHECK(flagged <= 2);
}
