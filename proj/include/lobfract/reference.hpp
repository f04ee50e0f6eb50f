#pragma once

#include <cmath>
#include <vector>

#include "lobfract/dfa.hpp"

namespace lobfract {

/// Naive reference DFA, deliberately independent of the optimized path in
/// dfa.hpp: explicit Vandermonde least squares per window in long double,
/// residuals evaluated pointwise from the fitted polynomial. Used by the
/// validation suite and the equivalence tests; never by the pipeline.
namespace reference {

namespace detail {

inline std::vector<long double> solve_normal_equations(
    const std::vector<std::vector<long double>>& vand, const std::vector<long double>& y) {
    const std::size_t rows = vand.size();
    const std::size_t cols = vand.front().size();
    std::vector<std::vector<long double>> a(cols, std::vector<long double>(cols + 1, 0.0L));
    for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t k = 0; k < cols; ++k)
            for (std::size_t r = 0; r < rows; ++r) a[j][k] += vand[r][j] * vand[r][k];
        for (std::size_t r = 0; r < rows; ++r) a[j][cols] += vand[r][j] * y[r];
    }
    for (std::size_t col = 0; col < cols; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < cols; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        std::swap(a[col], a[piv]);
        for (std::size_t r = col + 1; r < cols; ++r) {
            const long double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c <= cols; ++c) a[r][c] -= f * a[col][c];
        }
    }
    std::vector<long double> coeff(cols);
    for (std::size_t r = cols; r-- > 0;) {
        long double v = a[r][cols];
        for (std::size_t c = r + 1; c < cols; ++c) v -= a[r][c] * coeff[c];
        coeff[r] = v / a[r][r];
    }
    return coeff;
}

} // namespace detail

inline std::vector<double> profile(const std::vector<double>& series) {
    if (series.empty()) throw EmptySeries("reference profile of empty series");
    long double mean = 0.0L;
    for (double x : series) mean += x;
    mean /= static_cast<long double>(series.size());
    std::vector<double> y(series.size());
    long double acc = 0.0L;
    for (std::size_t k = 0; k < series.size(); ++k) {
        acc += static_cast<long double>(series[k]) - mean;
        y[k] = static_cast<double>(acc);
    }
    return y;
}

inline FluctuationCurve fluctuation(const std::vector<double>& series,
                                    const std::vector<std::int64_t>& scales, int detrend_order,
                                    bool both_ends = false) {
    const std::vector<double> prof = profile(series);
    const auto n = static_cast<std::int64_t>(series.size());

    auto window_variance = [&](std::int64_t start, std::int64_t s) -> long double {
        std::vector<std::vector<long double>> vand(
            static_cast<std::size_t>(s), std::vector<long double>(detrend_order + 1));
        std::vector<long double> y(static_cast<std::size_t>(s));
        for (std::int64_t i = 0; i < s; ++i) {
            long double xp = 1.0L;
            for (int k = 0; k <= detrend_order; ++k) {
                vand[i][k] = xp;
                xp *= static_cast<long double>(i);
            }
            y[i] = prof[start + i];
        }
        const auto coeff = detail::solve_normal_equations(vand, y);
        long double ss = 0.0L;
        for (std::int64_t i = 0; i < s; ++i) {
            long double fit = 0.0L;
            for (int k = 0; k <= detrend_order; ++k) fit += coeff[k] * vand[i][k];
            const long double res = y[i] - fit;
            ss += res * res;
        }
        return ss / static_cast<long double>(s);
    };

    FluctuationCurve curve;
    curve.scales = scales;
    curve.n_source = series.size();
    curve.fluctuations.reserve(scales.size());
    for (std::int64_t s : scales) {
        const std::int64_t m = n / s;
        long double total = 0.0L;
        for (std::int64_t w = 0; w < m; ++w) total += window_variance(w * s, s);
        std::int64_t n_windows = m;
        if (both_ends) {
            for (std::int64_t w = 0; w < m; ++w) total += window_variance(n - (w + 1) * s, s);
            n_windows *= 2;
        }
        curve.fluctuations.push_back(
            static_cast<double>(std::sqrt(total / static_cast<long double>(n_windows))));
    }
    return curve;
}

} // namespace reference
} // namespace lobfract
