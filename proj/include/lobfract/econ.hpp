#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "lobfract/book.hpp"
#include "lobfract/durations.hpp"

namespace lobfract {

/// Last-value-forward mid-price path; points exist only at instants with
/// a two-sided book.
struct MidPoint {
    std::int64_t timestamp_ms = 0;
    double mid = 0.0;
};

/// Replay the day's events and record the mid-price after every change.
inline std::vector<MidPoint> mid_price_path(const std::vector<EventRecord>& events) {
    BookState book;
    std::vector<MidPoint> path;
    for (const auto& e : events) {
        book.apply_event(e);
        const auto bb = book.best_bid();
        const auto ba = book.best_ask();
        if (!bb || !ba) continue;
        const double mid = (static_cast<double>(*bb) + static_cast<double>(*ba)) / 2.0;
        if (!path.empty() && path.back().timestamp_ms == e.timestamp_ms)
            path.back().mid = mid;
        else if (path.empty() || path.back().mid != mid)
            path.push_back({e.timestamp_ms, mid});
    }
    return path;
}

namespace detail {

/// Last-known mid at time t, or NaN before the first path point.
inline double sample_mid(const std::vector<MidPoint>& path, std::int64_t t) {
    if (path.empty() || t < path.front().timestamp_ms)
        return std::numeric_limits<double>::quiet_NaN();
    std::size_t lo = 0, hi = path.size();
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (path[mid].timestamp_ms <= t) lo = mid;
        else hi = mid;
    }
    return path[lo].mid;
}

} // namespace detail

/// Sub-sampled and averaged realized variance: sum squared log-returns on
/// each offset grid of `grid_seconds` spacing, then average over offsets.
inline double realized_variance(const std::vector<MidPoint>& path, const SessionWindow& window,
                                int grid_seconds = 300, int n_offsets = 30) {
    if (grid_seconds <= 0 || n_offsets <= 0 || (grid_seconds * 1000) % n_offsets != 0)
        throw ConfigError("grid must divide evenly into offset steps");
    const std::int64_t grid_ms = static_cast<std::int64_t>(grid_seconds) * 1000;
    const std::int64_t delta_ms = grid_ms / n_offsets;

    double total = 0.0;
    int grids_used = 0;
    for (int o = 0; o < n_offsets; ++o) {
        double sum = 0.0;
        double prev = std::numeric_limits<double>::quiet_NaN();
        int samples = 0;
        for (std::int64_t t = window.lo() + o * delta_ms; t < window.hi(); t += grid_ms) {
            const double mid = detail::sample_mid(path, t);
            if (std::isnan(mid) || mid <= 0.0) continue;
            if (!std::isnan(prev)) {
                const double r = std::log(mid / prev);
                sum += r * r;
            }
            prev = mid;
            ++samples;
        }
        if (samples >= 2) {
            total += sum;
            ++grids_used;
        }
    }
    if (grids_used == 0) throw InsufficientPath("no offset grid had two mid-price samples");
    return total / grids_used;
}

/// The five per-day explanatory variables for one (stock, day, side, variable).
struct DailyEcon {
    std::string stock_id;
    std::string day;
    Side side = Side::BID;
    Variable variable = Variable::OR_OR;
    double avg_duration_ms = 0.0;
    std::size_t activity = 0;
    double avg_quantity = 0.0;
    double daily_log_return = 0.0;
    double realized_var = 0.0;
};

namespace detail {

inline bool raw_matches_kind(const EventRecord& e, EventKind kind) {
    switch (e.type) {
        case EventType::ADD: return kind == EventKind::ORDER;
        case EventType::EXECUTE: return kind == EventKind::TRADE;
        case EventType::CANCEL:
        case EventType::DELETE: return kind == EventKind::CANCEL;
    }
    return false;
}

} // namespace detail

inline DailyEcon daily_economics(const DurationSeries& series,
                                 const std::vector<EventRecord>& raw_events,
                                 const std::vector<MidPoint>& mids, const SessionWindow& window,
                                 int rv_grid_seconds = 300, int rv_offsets = 30) {
    if (series.values.empty()) throw EmptyDay("empty duration series");
    DailyEcon econ;
    econ.stock_id = series.stock_id;
    econ.day = series.day;
    econ.side = series.side;
    econ.variable = series.variable;
    econ.activity = series.n();

    double dsum = 0.0;
    for (auto v : series.values) dsum += static_cast<double>(v);
    econ.avg_duration_ms = dsum / static_cast<double>(series.n());

    const EventKind kind = variable_kind(series.variable);
    double qsum = 0.0;
    std::size_t qn = 0;
    for (const auto& e : raw_events) {
        if (e.side != series.side || !detail::raw_matches_kind(e, kind)) continue;
        qsum += static_cast<double>(e.quantity);
        ++qn;
    }
    econ.avg_quantity = qn ? qsum / static_cast<double>(qn) : 0.0;

    if (mids.empty()) throw EmptyDay("no two-sided mid-price observations");
    econ.daily_log_return = std::log(mids.back().mid / mids.front().mid);
    econ.realized_var = realized_variance(mids, window, rv_grid_seconds, rv_offsets);
    return econ;
}

namespace detail {

/// Regularized incomplete beta I_x(a,b) by Lentz's continued fraction.
inline double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-14, kFpMin = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0, d = 1.0 - qab * x / qap;
    if (std::abs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

inline double reg_inc_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double lbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    const double front = std::exp(a * std::log(x) + b * std::log(1.0 - x) - lbeta);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

/// Two-sided tail probability P(|T| > t) for Student-t with nu dof.
inline double student_t_two_sided_p(double t, double nu) {
    const double x = nu / (nu + t * t);
    return reg_inc_beta(nu / 2.0, 0.5, x);
}

/// Upper quantile t* with P(|T| > t*) = p, by bisection.
inline double student_t_two_sided_quantile(double p, double nu) {
    double lo = 0.0, hi = 1.0;
    while (student_t_two_sided_p(hi, nu) > p) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (student_t_two_sided_p(mid, nu) > p) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace detail

struct CorrelationResult {
    std::string alpha_variable;
    std::string econ_variable;
    double r = 0.0;
    std::size_t n = 0;
    double r_critical = 0.0;
    bool significant_99 = false;
};

/// Critical |r| for the two-sided Pearson test at significance level
/// `alpha_level`: r_crit = t* / sqrt(n - 2 + t*^2).
inline double pearson_critical_r(std::size_t n, double alpha_level = 0.01) {
    if (n < 3) throw InsufficientData("need n >= 3 for a correlation test");
    const double nu = static_cast<double>(n - 2);
    const double t = detail::student_t_two_sided_quantile(alpha_level, nu);
    return t / std::sqrt(nu + t * t);
}

/// Pearson correlation of paired samples with the 0.01-level significance
/// flag. Inputs must already be paired by day.
inline CorrelationResult correlate(const std::vector<double>& xs, const std::vector<double>& ys,
                                   double alpha_level = 0.01) {
    if (xs.size() != ys.size()) throw InsufficientData("correlate inputs differ in length");
    const std::size_t n = xs.size();
    if (n < 3) throw InsufficientData("need n >= 3 paired observations");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mx, dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw ZeroVariance("constant input to correlate");

    CorrelationResult out;
    out.n = n;
    out.r = sxy / std::sqrt(sxx * syy);
    if (out.r > 1.0) out.r = 1.0;
    if (out.r < -1.0) out.r = -1.0;
    out.r_critical = pearson_critical_r(n, alpha_level);
    out.significant_99 = std::abs(out.r) > out.r_critical;
    return out;
}

} // namespace lobfract
