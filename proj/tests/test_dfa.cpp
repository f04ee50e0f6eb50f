#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "lobfract/dfa.hpp"
#include "lobfract/reference.hpp"
#include "lobfract/synth.hpp"

using namespace lobfract;
using Catch::Approx;

TEST_CASE("profile follows the cumulative mean-subtracted sum") {
    CHECK(profile({1, 2, 3}) == std::vector<double>{-1, -1, 0});
    CHECK(profile({5, 5, 5, 5}) == std::vector<double>{0, 0, 0, 0});
    CHECK_THROWS_AS(profile({}), EmptySeries);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(-10, 10);
    std::vector<double> x(1000);
    double abs_sum = 0;
    for (auto& v : x) {
        v = unif(rng);
        abs_sum += std::abs(v);
    }
    CHECK(std::abs(profile(x).back()) < 1e-9 * abs_sum);
}

TEST_CASE("fluctuation of a constant series is zero") {
    const std::vector<double> x(64, 3.25);
    const auto c = fluctuation(x, {4, 8, 16}, 1);
    for (double f : c.fluctuations) CHECK(f == Approx(0.0).margin(1e-12));
}

TEST_CASE("alternating series at s=4 matches the hand-computed value") {
    // profile of [1,0,1,0,1,0,1,0] is [.5,0,.5,0,.5,0,.5,0]; both linear
    // window fits leave residual SS 0.2, so F = sqrt(0.05).
    const std::vector<double> x2 = {1, 0, 1, 0, 1, 0, 1, 0,
                                    1, 0, 1, 0, 1, 0, 1, 0};
    const auto curve = fluctuation(x2, {4}, 1);
    CHECK(curve.fluctuations[0] == Approx(std::sqrt(0.05)).epsilon(1e-12));
}

TEST_CASE("scale validation") {
    const std::vector<double> x(64, 0.0);
    CHECK_THROWS_AS(fluctuation(x, {2}, 1), ScaleTooSmall);
    CHECK_THROWS_AS(fluctuation(x, {17}, 1), ScaleTooLarge);
    CHECK_THROWS_AS(fluctuation({}, {4}, 1), EmptySeries);
}

TEST_CASE("piecewise-linear profile on the window grid detrends to zero") {
    // x = [1 x4, 3 x4] has profile [-1,-2,-3,-4,-3,-2,-1,0]: linear on each
    // window of 4, so order-1 detrending removes it entirely.
    const std::vector<double> x = {1, 1, 1, 1, 3, 3, 3, 3, 1, 1, 1, 1, 3, 3, 3, 3};
    const auto c = fluctuation(x, {4}, 1);
    CHECK(c.fluctuations[0] == Approx(0.0).margin(1e-12));
}

TEST_CASE("fluctuation invariances: shift and scale") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss;
    std::vector<double> x(512);
    for (auto& v : x) v = gauss(rng);
    std::vector<double> shifted(x), scaled(x);
    for (auto& v : shifted) v += 123.456;
    for (auto& v : scaled) v *= -2.5;

    const auto scales = scale_grid(8, 128);
    const auto base = fluctuation(x, scales, 1);
    const auto fs = fluctuation(shifted, scales, 1);
    const auto fc = fluctuation(scaled, scales, 1);
    for (std::size_t i = 0; i < scales.size(); ++i) {
        CHECK(fs.fluctuations[i] == Approx(base.fluctuations[i]).epsilon(1e-9));
        CHECK(fc.fluctuations[i] == Approx(2.5 * base.fluctuations[i]).epsilon(1e-9));
    }
}

TEST_CASE("optimized fluctuation matches the naive reference") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unif(-1, 1);
    for (int order = 1; order <= 3; ++order) {
        std::vector<double> x(1024);
        for (auto& v : x) v = unif(rng);
        const auto scales = scale_grid(8, 256);
        const auto fast = fluctuation(x, scales, order);
        const auto ref = reference::fluctuation(x, scales, order);
        for (std::size_t i = 0; i < scales.size(); ++i)
            CHECK(fast.fluctuations[i] ==
                  Approx(ref.fluctuations[i]).epsilon(1e-10));
    }
}

TEST_CASE("both-ends partition averages both anchorings") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> unif(-1, 1);
    std::vector<double> x(1000); // N mod s != 0 so the anchorings differ
    for (auto& v : x) v = unif(rng);
    const auto fast = fluctuation(x, {48}, 1, true);
    const auto ref = reference::fluctuation(x, {48}, 1, true);
    CHECK(fast.fluctuations[0] == Approx(ref.fluctuations[0]).epsilon(1e-10));
    const auto one_end = fluctuation(x, {48}, 1, false);
    CHECK(fast.fluctuations[0] != one_end.fluctuations[0]);
}

TEST_CASE("fit_alpha recovers an exact power law to machine precision") {
    FluctuationCurve c;
    c.n_source = 1 << 20;
    for (int i = 0; i < 20; ++i) {
        const auto s = static_cast<std::int64_t>(std::llround(8 * std::pow(1.6, i)));
        if (!c.scales.empty() && s <= c.scales.back()) continue;
        c.scales.push_back(s);
        c.fluctuations.push_back(3.0 * std::pow(static_cast<double>(s), 0.75));
    }
    const auto fit = fit_alpha(c, 0.0, static_cast<double>(c.scales.back()));
    CHECK(fit.alpha == Approx(0.75).margin(1e-12));
    CHECK(fit.r_squared == Approx(1.0).margin(1e-12));
    CHECK(std::pow(10.0, fit.intercept) == Approx(3.0).epsilon(1e-10));
}

TEST_CASE("fit_alpha failure modes") {
    FluctuationCurve c;
    c.scales = {8, 16, 32};
    c.fluctuations = {1.0, 2.0, 0.0};
    c.n_source = 128;
    CHECK_THROWS_AS(fit_alpha(c, 0.0, 10.0), InsufficientPoints); // one sample in range
    CHECK_THROWS_AS(fit_alpha(c, 0.0, 100.0), ZeroFluctuationInRange);
    CHECK_THROWS_AS(fit_alpha(c, 0.0, 100.0, true), MissingNormalization);
}

namespace {

// Continuous piecewise power law in normalized scale, one slope per regime.
FluctuationCurve piecewise_curve(const std::vector<double>& knees,
                                 const std::vector<double>& slopes, double a) {
    FluctuationCurve c;
    c.normalization = a;
    c.n_source = 1 << 24;
    const double lo = std::log10(0.001), hi = std::log10(200.0);
    for (double ls = lo; ls <= hi; ls += 0.05) {
        const double stilde = std::pow(10.0, ls);
        const auto scale = static_cast<std::int64_t>(std::llround(stilde * a));
        if (!c.scales.empty() && scale <= c.scales.back()) continue;
        const double st = static_cast<double>(scale) / a;
        double logf = 0.0;
        double prev_knee = 1e-6;
        std::size_t regime = 0;
        while (regime < knees.size() && st > knees[regime]) ++regime;
        for (std::size_t r = 0; r < regime; ++r) {
            logf += slopes[r] * (std::log10(knees[r]) - std::log10(prev_knee));
            prev_knee = knees[r];
        }
        logf += slopes[regime] * (std::log10(st) - std::log10(prev_knee));
        c.scales.push_back(scale);
        c.fluctuations.push_back(std::pow(10.0, logf));
    }
    return c;
}

} // namespace

TEST_CASE("two-regime crossover curve yields both local slopes") {
    const auto c = piecewise_curve({1.0}, {0.6, 0.8}, 50000.0);
    CHECK(fit_alpha(c, 0.003, 0.1, true).alpha == Approx(0.6).margin(1e-10));
    CHECK(fit_alpha(c, 10.0, 100.0, true).alpha == Approx(0.8).margin(1e-10));
}

TEST_CASE("local_alphas recovers three constructed slopes") {
    const auto c = piecewise_curve({0.2, 5.0}, {0.65, 0.72, 0.80}, 50000.0);
    const auto la = local_alphas(c);
    REQUIRE(la.alpha1.fit);
    REQUIRE(la.alpha2.fit);
    REQUIRE(la.alpha3.fit);
    CHECK(la.alpha1.fit->alpha == Approx(0.65).margin(1e-10));
    CHECK(la.alpha2.fit->alpha == Approx(0.72).margin(1e-10));
    CHECK(la.alpha3.fit->alpha == Approx(0.80).margin(1e-10));
}

TEST_CASE("empty bands report errors without failing the others") {
    auto c = piecewise_curve({0.2, 5.0}, {0.65, 0.72, 0.80}, 50000.0);
    // keep only intra-day scales
    FluctuationCurve intra;
    intra.normalization = c.normalization;
    intra.n_source = c.n_source;
    for (std::size_t i = 0; i < c.scales.size(); ++i) {
        if (static_cast<double>(c.scales[i]) / *c.normalization > 0.1) break;
        intra.scales.push_back(c.scales[i]);
        intra.fluctuations.push_back(c.fluctuations[i]);
    }
    const auto la = local_alphas(intra);
    CHECK(la.alpha1.fit);
    CHECK_FALSE(la.alpha2.fit);
    CHECK_FALSE(la.alpha3.fit);
    CHECK_FALSE(la.alpha2.error.empty());

    FluctuationCurve nonorm = intra;
    nonorm.normalization.reset();
    CHECK_THROWS_AS(local_alphas(nonorm), MissingNormalization);
}

TEST_CASE("day and month reference ticks sit where the bands expect them") {
    // normalized scale 1 is a trading day; log10(30) = 1.48 is a month
    CHECK(kBand2Lo < 1.0);
    CHECK(1.0 <= kBand2Hi);
    CHECK(std::log10(30.0) == Approx(1.48).margin(0.01));
    CHECK(std::pow(10.0, 1.48) < kBand3Hi);
}

TEST_CASE("daily_alpha on i.i.d. exponential durations is near one half") {
    std::mt19937_64 rng(101);
    std::exponential_distribution<double> expo(1.0 / 800.0);
    DurationSeries s{"S", "20100601", Side::BID, Variable::TR_TR, {}};
    for (int i = 0; i < 4096; ++i) s.values.push_back(std::llround(expo(rng)));
    const auto fit = daily_alpha(s);
    CHECK(fit.alpha == Approx(0.5).margin(0.08));
}

TEST_CASE("daily_alpha on fGn(H=0.7) durations recovers the exponent") {
    GeneratorSpec spec{SignalKind::FGN, 0.7, 1 << 15, 2024};
    const auto g = generate(spec);
    DurationSeries s{"S", "20100601", Side::BID, Variable::TR_TR, {}};
    for (double v : g) s.values.push_back(std::llround(1000.0 * std::exp(0.1 * v)));
    const auto fit = daily_alpha(s);
    CHECK(fit.alpha == Approx(0.7).margin(0.05));
}

TEST_CASE("short days are skipped via SeriesTooShort") {
    DurationSeries s{"S", "20100601", Side::BID, Variable::TR_TR,
                     std::vector<std::int64_t>(50, 100)};
    CHECK_THROWS_AS(daily_alpha(s), SeriesTooShort);
}

TEST_CASE("summarize_alphas computes mean, sample std and CI") {
    std::vector<ScalingFit> fits(2);
    fits[0].alpha = 0.6;
    fits[1].alpha = 0.8;
    const auto sum = summarize_alphas(fits);
    CHECK(sum.mean == Approx(0.7));
    CHECK(sum.std_dev == Approx(std::sqrt(0.02)).epsilon(1e-12));
    CHECK(sum.ci95_half_width == Approx(1.96 * std::sqrt(0.02) / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(sum.n_days == 2);
    CHECK_THROWS_AS(summarize_alphas({fits[0]}), InsufficientData);
}

TEST_CASE("scale grid is strictly increasing within bounds") {
    const auto grid = scale_grid(8, 250000, 20);
    CHECK(grid.front() == 8);
    CHECK(grid.back() == 250000);
    for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
}
