#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <mutex>
#include <random>
#include <vector>

#include <fftw3.h>

#include "lobfract/events.hpp"
#include "lobfract/durations.hpp"

namespace lobfract {

enum class SignalKind : std::uint8_t { WHITE, BROWNIAN_INCREMENTS_INTEGRATED, FGN };

struct GeneratorSpec {
    SignalKind kind = SignalKind::WHITE;
    double hurst = 0.5; // only for FGN, must be in (0,1)
    std::size_t length = 0;
    std::uint64_t seed = 0;

    void validate() const {
        if (length < 2) throw InvalidShapeParams("signal length must be >= 2");
        if (kind == SignalKind::FGN && (hurst <= 0.0 || hurst >= 1.0))
            throw InvalidShapeParams("hurst must be in (0,1)");
    }
};

namespace detail {

// FFTW planning is not thread-safe; execution of distinct plans is.
inline std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}

inline void fft_inplace(std::vector<std::complex<double>>& data, int sign) {
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(data.size()),
                                reinterpret_cast<fftw_complex*>(data.data()),
                                reinterpret_cast<fftw_complex*>(data.data()), sign,
                                FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        fftw_destroy_plan(plan);
    }
}

/// Exact fGn autocovariance at lag k for unit-variance increments.
inline double fgn_autocov(std::int64_t k, double hurst) {
    const double h2 = 2.0 * hurst;
    const double a = static_cast<double>(std::llabs(k));
    return 0.5 * (std::pow(a + 1.0, h2) - 2.0 * std::pow(a, h2) + std::pow(std::abs(a - 1.0), h2));
}

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

/// Circulant-embedding (spectral) synthesis of fGn: embed the Toeplitz
/// autocovariance in a circulant of power-of-two size, take the FFT to
/// get its eigenvalues, then color complex white noise.
inline std::vector<double> generate_fgn(std::size_t n, double hurst, std::mt19937_64& rng) {
    std::size_t m = next_pow2(2 * n);
    for (int attempt = 0;; ++attempt) {
        std::vector<std::complex<double>> spec(m);
        for (std::size_t j = 0; j < m; ++j) {
            const std::size_t lag = j <= m / 2 ? j : m - j;
            spec[j] = fgn_autocov(static_cast<std::int64_t>(lag), hurst);
        }
        fft_inplace(spec, FFTW_FORWARD);

        bool ok = true;
        std::vector<double> eig(m);
        for (std::size_t j = 0; j < m; ++j) {
            eig[j] = spec[j].real();
            if (eig[j] < -1e-8 * static_cast<double>(m)) ok = false;
            if (eig[j] < 0.0) eig[j] = 0.0;
        }
        if (!ok) {
            if (attempt >= 3)
                throw EmbeddingFailure("circulant embedding not nonnegative after 3 doublings");
            m <<= 1;
            continue;
        }

        std::normal_distribution<double> gauss(0.0, 1.0);
        std::vector<std::complex<double>> w(m);
        for (std::size_t j = 0; j < m; ++j) {
            const double a = gauss(rng);
            const double b = gauss(rng);
            w[j] = std::sqrt(eig[j]) * std::complex<double>(a, b);
        }
        fft_inplace(w, FFTW_BACKWARD);

        const double scale = 1.0 / std::sqrt(static_cast<double>(m));
        std::vector<double> out(n);
        for (std::size_t k = 0; k < n; ++k) out[k] = w[k].real() * scale;
        return out;
    }
}

} // namespace detail

/// Deterministic validation signals with known DFA exponent: white noise
/// (0.5), integrated white noise (1.5), fGn with exponent H.
inline std::vector<double> generate(const GeneratorSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    switch (spec.kind) {
        case SignalKind::WHITE: {
            std::normal_distribution<double> gauss(0.0, 1.0);
            std::vector<double> out(spec.length);
            for (auto& x : out) x = gauss(rng);
            return out;
        }
        case SignalKind::BROWNIAN_INCREMENTS_INTEGRATED: {
            std::normal_distribution<double> gauss(0.0, 1.0);
            std::vector<double> out(spec.length);
            double acc = 0.0;
            for (auto& x : out) {
                acc += gauss(rng);
                x = acc;
            }
            return out;
        }
        case SignalKind::FGN: return detail::generate_fgn(spec.length, spec.hurst, rng);
    }
    throw Error("unreachable signal kind");
}

/// How one synthetic trading day is driven.
struct OrderFlowSpec {
    Variable variable = Variable::TR_TR; // which duration series carries the signal
    Side side = Side::BID;
    bool iid_exponential = false; // otherwise log-duration model on `gen`
    GeneratorSpec gen;            // durations = mean * exp(sigma * signal)
    double mean_duration_ms = 1000.0;
    double log_sigma = 0.1;
    std::size_t n_events = 0; // driving events; series length is n_events-1 for inter-event
    SessionWindow window{};
    std::int64_t base_price = 10000;
    std::int64_t quantity = 100;
};

/// Build one valid day of canonical events whose chosen duration series
/// equals the generated durations up to millisecond rounding. A static
/// two-sided quote frames the book; driving orders sit inside it.
inline std::vector<EventRecord> synth_order_flow(const OrderFlowSpec& spec) {
    if (spec.n_events < 2) throw InvalidShapeParams("need at least 2 driving events");
    if (spec.mean_duration_ms <= 0.0) throw InvalidShapeParams("mean_duration_ms must be > 0");
    spec.window.validate();

    const std::size_t n_durations = spec.n_events - 1;
    std::vector<std::int64_t> durations(n_durations);
    if (spec.iid_exponential) {
        std::mt19937_64 rng(spec.gen.seed);
        std::exponential_distribution<double> expo(1.0 / spec.mean_duration_ms);
        for (auto& d : durations) d = std::llround(expo(rng));
    } else {
        GeneratorSpec g = spec.gen;
        g.length = n_durations;
        const std::vector<double> signal = generate(g);
        for (std::size_t i = 0; i < n_durations; ++i)
            durations[i] = std::llround(spec.mean_duration_ms *
                                        std::exp(spec.log_sigma * signal[i]));
    }

    std::vector<std::int64_t> times(spec.n_events);
    times[0] = spec.window.lo();
    for (std::size_t i = 0; i < n_durations; ++i) times[i + 1] = times[i] + durations[i];
    if (times.back() >= spec.window.hi())
        throw InvalidShapeParams("generated day does not fit in the session window");

    std::vector<EventRecord> out;
    out.reserve(3 * spec.n_events + 2);
    std::uint64_t next_id = 1;

    // Static frame quotes, never removed.
    out.push_back({spec.window.lo(), EventType::ADD, next_id++, Side::BID,
                   spec.base_price - 10, spec.quantity});
    out.push_back({spec.window.lo(), EventType::ADD, next_id++, Side::ASK,
                   spec.base_price + 10, spec.quantity});
    const std::int64_t drive_price =
        spec.side == Side::BID ? spec.base_price : spec.base_price + 5;

    const bool lifetime = is_lifetime(spec.variable);
    std::uint64_t open_order = 0;
    for (std::size_t k = 0; k < spec.n_events; ++k) {
        const std::int64_t t = times[k];
        if (lifetime) {
            // Chain: terminate the previous order at t, then submit the next.
            if (open_order != 0) {
                const EventType term = spec.variable == Variable::OR_TR ? EventType::EXECUTE
                                                                        : EventType::CANCEL;
                out.push_back({t, term, open_order, spec.side, drive_price, spec.quantity});
            }
            open_order = next_id++;
            out.push_back({t, EventType::ADD, open_order, spec.side, drive_price, spec.quantity});
        } else {
            const std::uint64_t id = next_id++;
            out.push_back({t, EventType::ADD, id, spec.side, drive_price, spec.quantity});
            const EventType term = spec.variable == Variable::TR_TR ? EventType::EXECUTE
                                                                    : EventType::CANCEL;
            out.push_back({t, term, id, spec.side, drive_price, spec.quantity});
        }
    }
    return out;
}

} // namespace lobfract
