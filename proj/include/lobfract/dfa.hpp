#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lobfract/durations.hpp"
#include "lobfract/errors.hpp"

namespace lobfract {

/// DFA step i: cumulative sum of the mean-subtracted series.
inline std::vector<double> profile(const std::vector<double>& series) {
    if (series.empty()) throw EmptySeries("profile of empty series");
    double mean = 0.0;
    for (double x : series) mean += x;
    mean /= static_cast<double>(series.size());
    std::vector<double> y(series.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < series.size(); ++k) {
        acc += series[k] - mean;
        y[k] = acc;
    }
    return y;
}

/// (scale, F(scale)) samples. `normalization` is the average daily event
/// count A; when set, the normalized scale is s / A.
struct FluctuationCurve {
    std::vector<std::int64_t> scales;
    std::vector<double> fluctuations;
    std::size_t n_source = 0;
    std::optional<double> normalization;
};

/// Log-spaced integer scale grid, ~per_decade points per decade, deduplicated.
inline std::vector<std::int64_t> scale_grid(std::int64_t s_min, std::int64_t s_max,
                                            int per_decade = 20) {
    if (s_min < 2 || s_max < s_min) return {};
    std::vector<std::int64_t> scales;
    const double step = 1.0 / per_decade;
    const double lo = std::log10(static_cast<double>(s_min));
    const double hi = std::log10(static_cast<double>(s_max));
    for (int i = 0;; ++i) {
        const double ls = lo + i * step;
        if (ls > hi + 1e-12) break;
        auto s = static_cast<std::int64_t>(std::llround(std::pow(10.0, ls)));
        s = std::clamp(s, s_min, s_max);
        if (scales.empty() || s > scales.back()) scales.push_back(s);
    }
    if (scales.empty() || scales.back() != s_max) scales.push_back(s_max);
    return scales;
}

namespace detail {

// Solves the (p+1)x(p+1) system G b = t by Gaussian elimination with
// partial pivoting. Dimensions are tiny (order <= 3).
inline void solve_small(std::vector<double> g, std::vector<double>& t, int n) {
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(g[r * n + col]) > std::abs(g[piv * n + col])) piv = r;
        if (piv != col) {
            for (int c = 0; c < n; ++c) std::swap(g[col * n + c], g[piv * n + c]);
            std::swap(t[col], t[piv]);
        }
        const double d = g[col * n + col];
        for (int r = col + 1; r < n; ++r) {
            const double f = g[r * n + col] / d;
            for (int c = col; c < n; ++c) g[r * n + c] -= f * g[col * n + c];
            t[r] -= f * t[col];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        double v = t[r];
        for (int c = r + 1; c < n; ++c) v -= g[r * n + c] * t[c];
        t[r] = v / g[r * n + r];
    }
}

// Mean squared residual of a degree-p least-squares fit over one window,
// via normal equations on the centered window index.
inline double window_msr(const double* y, std::int64_t s, int order,
                         const std::vector<double>& power_sums) {
    const int n = order + 1;
    std::vector<double> g(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) g[j * n + k] = power_sums[j + k];

    const double mid = (static_cast<double>(s) - 1.0) / 2.0;
    std::vector<double> t(n, 0.0);
    double syy = 0.0;
    for (std::int64_t i = 0; i < s; ++i) {
        const double x = static_cast<double>(i) - mid;
        const double yi = y[i];
        syy += yi * yi;
        double xp = 1.0;
        for (int k = 0; k < n; ++k) {
            t[k] += xp * yi;
            xp *= x;
        }
    }
    std::vector<double> b = t;
    solve_small(g, b, n);
    double rss = syy;
    for (int k = 0; k < n; ++k) rss -= b[k] * t[k];
    if (rss < 0.0) rss = 0.0;
    return rss / static_cast<double>(s);
}

} // namespace detail

/// DFA steps ii-iii: non-overlapping windows from the start, degree
/// `detrend_order` detrending per window, RMS of the averaged window
/// variances. The length-(N mod s) tail is discarded; with `both_ends`
/// a second partition anchored at the end is averaged in as well.
inline FluctuationCurve fluctuation(const std::vector<double>& series,
                                    const std::vector<std::int64_t>& scales, int detrend_order,
                                    bool both_ends = false) {
    if (series.empty()) throw EmptySeries("fluctuation of empty series");
    const auto n = static_cast<std::int64_t>(series.size());
    for (std::size_t i = 0; i < scales.size(); ++i) {
        if (scales[i] < detrend_order + 2)
            throw ScaleTooSmall("scale " + std::to_string(scales[i]) + " < order+2");
        if (4 * scales[i] > n)
            throw ScaleTooLarge("scale " + std::to_string(scales[i]) + " > N/4");
        if (i > 0 && scales[i] <= scales[i - 1])
            throw Error("scales must be strictly increasing");
    }

    const std::vector<double> prof = profile(series);
    FluctuationCurve curve;
    curve.scales = scales;
    curve.fluctuations.resize(scales.size());
    curve.n_source = series.size();

    for (std::size_t si = 0; si < scales.size(); ++si) {
        const std::int64_t s = scales[si];
        const std::int64_t m = n / s;

        // Power sums of the centered index depend on s only.
        const double mid = (static_cast<double>(s) - 1.0) / 2.0;
        std::vector<double> power_sums(2 * detrend_order + 1, 0.0);
        for (std::int64_t i = 0; i < s; ++i) {
            const double x = static_cast<double>(i) - mid;
            double xp = 1.0;
            for (auto& ps : power_sums) {
                ps += xp;
                xp *= x;
            }
        }

        double var_sum = 0.0;
        for (std::int64_t w = 0; w < m; ++w)
            var_sum += detail::window_msr(prof.data() + w * s, s, detrend_order, power_sums);
        std::int64_t n_windows = m;
        if (both_ends) {
            for (std::int64_t w = 0; w < m; ++w)
                var_sum +=
                    detail::window_msr(prof.data() + (n - (w + 1) * s), s, detrend_order,
                                       power_sums);
            n_windows *= 2;
        }
        curve.fluctuations[si] = std::sqrt(var_sum / static_cast<double>(n_windows));
    }
    return curve;
}

/// Fitted scaling exponent over a (lo, hi] scale range. Fits are OLS on
/// (log10 scale, log10 F); intercepts are base-10.
struct ScalingFit {
    double alpha = 0.0;
    double intercept = 0.0;
    double range_lo = 0.0;
    double range_hi = 0.0;
    bool normalized = false;
    double r_squared = 0.0;
    std::size_t n_points = 0;
    double stderr_alpha = 0.0;
};

/// OLS slope on the log-log curve restricted to scales in (lo, hi].
/// With `normalized` the range is interpreted on s-tilde = s / A.
inline ScalingFit fit_alpha(const FluctuationCurve& curve, double lo, double hi,
                            bool normalized = false) {
    if (normalized && !curve.normalization)
        throw MissingNormalization("curve has no normalization constant");
    const double a = normalized ? *curve.normalization : 1.0;

    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < curve.scales.size(); ++i) {
        const double sc = static_cast<double>(curve.scales[i]) / a;
        if (sc <= lo || sc > hi) continue;
        if (curve.fluctuations[i] <= 0.0)
            throw ZeroFluctuationInRange("F=0 at scale " + std::to_string(curve.scales[i]));
        xs.push_back(std::log10(sc));
        ys.push_back(std::log10(curve.fluctuations[i]));
    }
    if (xs.size() < 2)
        throw InsufficientPoints("only " + std::to_string(xs.size()) + " curve samples in range");

    const auto n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw InsufficientPoints("degenerate fit range (single scale)");

    ScalingFit fit;
    fit.alpha = sxy / sxx;
    fit.intercept = my - fit.alpha * mx;
    fit.range_lo = lo;
    fit.range_hi = hi;
    fit.normalized = normalized;
    fit.n_points = xs.size();
    double rss = syy - fit.alpha * sxy;
    if (rss < 0.0) rss = 0.0;
    fit.r_squared = syy > 0.0 ? 1.0 - rss / syy : 1.0;
    fit.stderr_alpha = xs.size() > 2 ? std::sqrt(rss / (n - 2.0) / sxx) : 0.0;
    return fit;
}

/// Normalized-scale bands for the intra-day / day / month local exponents.
inline constexpr double kBand1Lo = 0.003, kBand1Hi = 0.1;
inline constexpr double kBand2Lo = 0.3, kBand2Hi = 3.0;
inline constexpr double kBand3Lo = 10.0, kBand3Hi = 100.0;

struct BandFit {
    std::optional<ScalingFit> fit;
    std::string error; // set when the band could not be fitted
};

struct LocalAlphas {
    BandFit alpha1; // intra-day
    BandFit alpha2; // around one trading day
    BandFit alpha3; // around one month
};

/// Local exponents over the three normalized-scale bands. A band without
/// enough curve samples reports its error without failing the others.
inline LocalAlphas local_alphas(const FluctuationCurve& curve) {
    if (!curve.normalization) throw MissingNormalization("curve has no normalization constant");
    auto fit_band = [&](double lo, double hi) -> BandFit {
        try {
            return {fit_alpha(curve, lo, hi, true), {}};
        } catch (const Error& e) {
            return {std::nullopt, e.what()};
        }
    };
    LocalAlphas out;
    out.alpha1 = fit_band(kBand1Lo, kBand1Hi);
    out.alpha2 = fit_band(kBand2Lo, kBand2Hi);
    out.alpha3 = fit_band(kBand3Lo, kBand3Hi);
    return out;
}

struct DfaConfig {
    int detrend_order = 1;
    std::int64_t s_min = 8;
    int scales_per_decade = 20;
    bool both_ends = false;
    std::size_t min_length = 64; // shorter days are skipped
};

/// Whole-curve exponent of one day's duration series: log-spaced scales
/// in [s_min, N/4], order-1 detrending by default, single global fit.
inline ScalingFit daily_alpha(const DurationSeries& series, const DfaConfig& cfg = {}) {
    if (series.n() < cfg.min_length)
        throw SeriesTooShort("series length " + std::to_string(series.n()) + " < min_length " +
                             std::to_string(cfg.min_length));
    std::vector<double> x(series.values.begin(), series.values.end());
    const auto n = static_cast<std::int64_t>(x.size());
    const auto scales = scale_grid(cfg.s_min, n / 4, cfg.scales_per_decade);
    const FluctuationCurve curve = fluctuation(x, scales, cfg.detrend_order, cfg.both_ends);
    const double max_scale = static_cast<double>(curve.scales.back());
    return fit_alpha(curve, 0.0, max_scale, false);
}

/// Mean/std/95% CI of daily exponents, sample std with n-1 denominator.
struct AlphaSummary {
    double mean = 0.0;
    double std_dev = 0.0;
    double ci95_half_width = 0.0;
    std::size_t n_days = 0;
};

inline AlphaSummary summarize_alphas(const std::vector<ScalingFit>& fits) {
    if (fits.size() < 2) throw InsufficientData("need at least 2 daily fits");
    AlphaSummary s;
    s.n_days = fits.size();
    const auto n = static_cast<double>(fits.size());
    for (const auto& f : fits) s.mean += f.alpha;
    s.mean /= n;
    double ss = 0.0;
    for (const auto& f : fits) {
        const double d = f.alpha - s.mean;
        ss += d * d;
    }
    s.std_dev = std::sqrt(ss / (n - 1.0));
    s.ci95_half_width = 1.96 * s.std_dev / std::sqrt(n);
    return s;
}

} // namespace lobfract
