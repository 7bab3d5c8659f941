#pragma once

// Phase sensitivity by error propagation, dphi = dA / |d<A>/dphi|, plus a
// seeded Monte Carlo of the detection record and log-log scaling fits.
//
// Random numbers: every batch owns a std::mt19937_64 seeded through
// std::seed_seq from (seed, batch index). Both are fully specified by the
// C++ standard, and uniforms are formed from the top 53 bits of each draw,
// so records are identical on every platform and for any worker count.
//
// The arccos estimator only sees the principal branch: phi in [0, pi] for
// the separable protocol and [0, pi/N] for NOON. Phases outside that range
// are recovered modulo the fringe symmetry of cos(N phi).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "noonsim/errors.hpp"
#include "noonsim/metrology.hpp"

namespace noonsim {

enum class DerivativeMode { closed_form, numeric_derivative };

inline std::string_view to_string(DerivativeMode m) {
    return m == DerivativeMode::closed_form ? "closed_form" : "numeric_derivative";
}

inline DerivativeMode parse_derivative_mode(std::string_view s) {
    if (s == "closed_form") return DerivativeMode::closed_form;
    if (s == "numeric_derivative") return DerivativeMode::numeric_derivative;
    throw InvalidArgument("unknown derivative mode '" + std::string(s) + "'");
}

/// Central-difference step in radians.
inline constexpr double kDerivativeStep = 1e-5;

/// Numeric sensitivity refuses phases closer than this to a stationary
/// point of the mean signal.
inline constexpr double kStationaryGuard = 1e-6;

struct SensitivityReport {
    Protocol protocol = Protocol::separable;
    unsigned n = 1;
    double phi = 0.0;
    double mean = 0.0;
    double std_dev = 0.0;
    double derivative = 0.0;
    double delta_phi = 0.0;

    bool operator==(const SensitivityReport&) const = default;
};

/// Distance from phi to the nearest zero of d<A>/dphi. Stationary points
/// sit at multiples of pi (separable) or pi/N (NOON).
inline double distance_to_stationary(Protocol protocol, unsigned n, double phi) {
    const double spacing = protocol == Protocol::separable ? std::numbers::pi : std::numbers::pi / n;
    const double r = std::fmod(std::abs(phi), spacing);
    return std::min(r, spacing - r);
}

inline SensitivityReport sensitivity(Protocol protocol, unsigned n, double phi, DerivativeMode mode) {
    if (n < 1) throw InvalidArgument("sensitivity: N must be >= 1");
    if (!std::isfinite(phi)) throw InvalidArgument("sensitivity: phi must be finite");
    const AnalyticSignal signal = analytic_signal(protocol, n);

    SensitivityReport r;
    r.protocol = protocol;
    r.n = n;
    r.phi = phi;
    r.mean = signal.mean(phi);
    r.std_dev = std::sqrt(signal.variance(phi));

    if (mode == DerivativeMode::closed_form) {
        r.derivative = signal.derivative(phi);
        // sqrt(N)|sin phi| / (N |sin phi|) and |sin N phi| / (N |sin N phi|)
        // with the common factor cancelled, so stationary points are fine.
        r.delta_phi = protocol == Protocol::separable ? 1.0 / std::sqrt(static_cast<double>(n))
                                                      : 1.0 / n;
        return r;
    }

    if (distance_to_stationary(protocol, n, phi) < kStationaryGuard) {
        throw DegeneratePhase("phi = " + std::to_string(phi) +
                              " is at a stationary point of the mean signal; "
                              "numeric sensitivity diverges there");
    }
    const double h = kDerivativeStep;
    r.derivative = (signal.mean(phi + h) - signal.mean(phi - h)) / (2.0 * h);
    r.delta_phi = r.std_dev / std::abs(r.derivative);
    return r;
}

struct MeasurementRecord {
    std::uint64_t seed = 0;
    Protocol protocol = Protocol::separable;
    unsigned n = 1;
    double phi_true = 0.0;
    std::size_t batches = 0;
    std::size_t outcomes_per_batch = 0;
    std::vector<double> phi_hats;
    double empirical_std = 0.0;

    double mean_phi_hat() const {
        double s = 0.0;
        for (double v : phi_hats) s += v;
        return phi_hats.empty() ? 0.0 : s / static_cast<double>(phi_hats.size());
    }

    bool operator==(const MeasurementRecord&) const = default;
};

namespace detail {

inline std::mt19937_64 batch_engine(std::uint64_t seed, std::uint64_t batch) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(batch), static_cast<std::uint32_t>(batch >> 32)};
    return std::mt19937_64(seq);
}

inline double uniform01(std::mt19937_64& engine) {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

/// Mean of `count` outcomes that are +1 with probability p_plus and -1 otherwise.
inline double mean_outcome(std::mt19937_64& engine, double p_plus, std::size_t count) {
    std::int64_t plus = 0;
    for (std::size_t i = 0; i < count; ++i) plus += uniform01(engine) < p_plus ? 1 : 0;
    return (2.0 * static_cast<double>(plus) - static_cast<double>(count)) / static_cast<double>(count);
}

inline double sample_std(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

} // namespace detail

/// Simulates `batches` independent estimates of phi_true.
///
/// separable: a batch is outcomes_per_batch repetitions of the N-particle
///   experiment, i.e. N * outcomes_per_batch single-particle sigma_x results.
/// noon: a batch is outcomes_per_batch readouts of A_N.
///
/// Each batch inverts its mean outcome with arccos (clamped to [-1, 1]),
/// divided by N for NOON. `workers` = 0 picks the hardware concurrency;
/// the result never depends on it.
inline MeasurementRecord sample_measurements(Protocol protocol, unsigned n, double phi_true,
                                             std::size_t batches, std::size_t outcomes_per_batch,
                                             std::uint64_t seed, unsigned workers = 0) {
    if (n < 1) throw InvalidArgument("sample_measurements: N must be >= 1");
    if (!std::isfinite(phi_true)) throw InvalidArgument("sample_measurements: phi must be finite");
    if (batches < 2) throw InsufficientData("sample_measurements: need at least 2 batches");
    if (outcomes_per_batch < 1) {
        throw InvalidArgument("sample_measurements: outcomes_per_batch must be >= 1");
    }

    const AnalyticSignal signal = analytic_signal(protocol, n);
    const double single_mean = protocol == Protocol::separable ? std::cos(phi_true) : signal.mean(phi_true);
    const double p_plus = std::clamp((1.0 + single_mean) / 2.0, 0.0, 1.0);
    const std::size_t draws = protocol == Protocol::separable ? n * outcomes_per_batch : outcomes_per_batch;
    const double divisor = protocol == Protocol::separable ? 1.0 : static_cast<double>(n);

    MeasurementRecord rec;
    rec.seed = seed;
    rec.protocol = protocol;
    rec.n = n;
    rec.phi_true = phi_true;
    rec.batches = batches;
    rec.outcomes_per_batch = outcomes_per_batch;
    rec.phi_hats.assign(batches, 0.0);

    auto run_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t b = begin; b < end; ++b) {
            auto engine = detail::batch_engine(seed, b);
            const double m = detail::mean_outcome(engine, p_plus, draws);
            rec.phi_hats[b] = std::acos(std::clamp(m, -1.0, 1.0)) / divisor;
        }
    };

    unsigned w = workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : workers;
    w = static_cast<unsigned>(std::min<std::size_t>(w, batches));
    if (w <= 1) {
        run_range(0, batches);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(w);
        for (unsigned k = 0; k < w; ++k) {
            const std::size_t begin = batches * k / w;
            const std::size_t end = batches * (k + 1) / w;
            pool.emplace_back(run_range, begin, end);
        }
    }

    rec.empirical_std = detail::sample_std(rec.phi_hats);
    return rec;
}

struct ScalingFit {
    std::vector<unsigned> n_values;
    std::vector<double> delta_phis;
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;

    bool operator==(const ScalingFit&) const = default;
};

/// Least-squares line through (log10 N, log10 dphi).
inline ScalingFit fit_power_law(std::vector<unsigned> n_values, std::vector<double> delta_phis) {
    if (n_values.size() != delta_phis.size()) {
        throw InvalidArgument("fit_power_law: n_values and delta_phis differ in length");
    }
    if (n_values.size() < 3) throw InsufficientData("scaling fit needs at least 3 points");
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        if (n_values[i] < 1) throw InvalidArgument("scaling fit: N values must be positive");
        if (i > 0 && n_values[i] <= n_values[i - 1]) {
            throw InvalidArgument("scaling fit: N values must be strictly increasing");
        }
        if (!(delta_phis[i] > 0.0) || !std::isfinite(delta_phis[i])) {
            throw InvalidArgument("scaling fit: delta_phi values must be positive and finite");
        }
    }

    const std::size_t m = n_values.size();
    std::vector<double> xs(m), ys(m);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        xs[i] = std::log10(static_cast<double>(n_values[i]));
        ys[i] = std::log10(delta_phis[i]);
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }

    ScalingFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double e = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss_res += e * e;
    }
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    fit.n_values = std::move(n_values);
    fit.delta_phis = std::move(delta_phis);
    return fit;
}

inline ScalingFit fit_scaling(Protocol protocol, std::vector<unsigned> n_values, double phi,
                              DerivativeMode mode) {
    if (n_values.size() < 3) throw InsufficientData("scaling fit needs at least 3 points");
    std::vector<double> deltas;
    deltas.reserve(n_values.size());
    for (unsigned n : n_values) deltas.push_back(sensitivity(protocol, n, phi, mode).delta_phi);
    return fit_power_law(std::move(n_values), std::move(deltas));
}

/// Working point with the steepest signal: N phi = pi/2 for NOON, phi = pi/2
/// for the separable probe.
inline double optimal_phase(Protocol protocol, unsigned n) {
    return protocol == Protocol::separable ? std::numbers::pi / 2 : std::numbers::pi / (2.0 * n);
}

/// Seed used for point `index` of a Monte Carlo scaling sweep.
inline std::uint64_t sweep_seed(std::uint64_t seed, std::size_t index) {
    return seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(index) + 1);
}

struct MonteCarloScaling {
    ScalingFit fit;
    std::vector<MeasurementRecord> records;
};

/// Monte Carlo counterpart of fit_scaling: each N is sampled at
/// optimal_phase(protocol, N) and contributes its empirical_std as dphi.
inline MonteCarloScaling montecarlo_scaling(Protocol protocol, const std::vector<unsigned>& n_values,
                                            std::size_t batches, std::size_t outcomes_per_batch,
                                            std::uint64_t seed, unsigned workers = 0) {
    if (n_values.size() < 3) throw InsufficientData("scaling fit needs at least 3 points");
    MonteCarloScaling out;
    std::vector<double> deltas;
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        const unsigned n = n_values[i];
        out.records.push_back(sample_measurements(protocol, n, optimal_phase(protocol, n), batches,
                                                  outcomes_per_batch, sweep_seed(seed, i), workers));
        deltas.push_back(out.records.back().empirical_std);
    }
    out.fit = fit_power_law(n_values, std::move(deltas));
    return out;
}

} // namespace noonsim
