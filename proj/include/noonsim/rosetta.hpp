#pragma once

// Three pictures of one phase measurement: a Mach-Zehnder interferometer
// in the two-mode Fock basis, a Ramsey sequence of pi/2 pulses, and a
// Hadamard-phase-Hadamard qubit circuit.
//
// Convention table (representation -> allowed conventions, and the map
// that brings raw detector statistics into the Hadamard frame, where
// p0 = cos^2(phi/2)):
//
//   hadamard       hadamard_exact    identity
//   ramsey         ry_pulse          swap p0 <-> p1 (R_y(pi/2) fringes are sin^2(phi/2))
//   mach_zehnder   bs_symmetric      identity (this splitter is H on the one-photon sector)
//   mach_zehnder   bs_i_convention   swap p0 <-> p1
//
// Swapping detectors is the same as shifting phi by pi.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "noonsim/errors.hpp"
#include "noonsim/metrology.hpp"
#include "noonsim/state_core.hpp"

namespace noonsim {

enum class Representation { mach_zehnder, ramsey, hadamard };

enum class Convention { hadamard_exact, ry_pulse, bs_symmetric, bs_i_convention };

inline std::string_view to_string(Representation r) {
    switch (r) {
    case Representation::mach_zehnder: return "mach_zehnder";
    case Representation::ramsey: return "ramsey";
    case Representation::hadamard: return "hadamard";
    }
    return "?";
}

inline std::string_view to_string(Convention c) {
    switch (c) {
    case Convention::hadamard_exact: return "hadamard_exact";
    case Convention::ry_pulse: return "ry_pulse";
    case Convention::bs_symmetric: return "bs_symmetric";
    case Convention::bs_i_convention: return "bs_i_convention";
    }
    return "?";
}

inline Convention parse_convention(std::string_view s) {
    if (s == "hadamard_exact") return Convention::hadamard_exact;
    if (s == "ry_pulse") return Convention::ry_pulse;
    if (s == "bs_symmetric") return Convention::bs_symmetric;
    if (s == "bs_i_convention") return Convention::bs_i_convention;
    throw ConventionError("unknown convention '" + std::string(s) + "'");
}

inline bool is_compatible(Representation r, Convention c) {
    switch (r) {
    case Representation::hadamard: return c == Convention::hadamard_exact;
    case Representation::ramsey: return c == Convention::ry_pulse;
    case Representation::mach_zehnder:
        return c == Convention::bs_symmetric || c == Convention::bs_i_convention;
    }
    return false;
}

/// True when the convention's raw fringes are the Hadamard fringes with
/// the two detectors exchanged.
inline bool relabels_detectors(Convention c) {
    return c == Convention::ry_pulse || c == Convention::bs_i_convention;
}

inline Convention default_convention(Representation r) {
    switch (r) {
    case Representation::hadamard: return Convention::hadamard_exact;
    case Representation::ramsey: return Convention::ry_pulse;
    case Representation::mach_zehnder: return Convention::bs_i_convention;
    }
    return Convention::hadamard_exact;
}

struct CircuitSpec {
    Representation representation = Representation::hadamard;
    double phi = 0.0;
    Convention convention = Convention::hadamard_exact;
};

struct DetectionStats {
    double p0 = 1.0;
    double p1 = 0.0;

    DetectionStats() = default;
    DetectionStats(double p0_, double p1_) : p0(p0_), p1(p1_) {
        if (p0 < -kTolerance || p0 > 1.0 + kTolerance || p1 < -kTolerance || p1 > 1.0 + kTolerance ||
            std::abs(p0 + p1 - 1.0) > kTolerance) {
            throw ContractViolation("detection probabilities (" + std::to_string(p0) + ", " +
                                    std::to_string(p1) + ") are not a distribution");
        }
    }

    DetectionStats swapped() const { return {p1, p0}; }
};

/// Photon number up to which Fock-sector operators are built.
inline constexpr unsigned kMaxFockPhotons = 30;

/// |n_a, N - n_a> in the N-photon sector.
inline PureState fock_state(unsigned total, unsigned photons_a) {
    if (photons_a > total) throw InvalidArgument("fock_state: more photons in mode a than in total");
    return PureState::basis_state(Basis::fock(total), total - photons_a);
}

namespace detail {

inline void require_fock_size(unsigned n, const char* what) {
    if (n < 1) throw InvalidArgument(std::string(what) + ": N must be >= 1");
    if (n > kMaxFockPhotons) {
        throw ExactSizeExceeded(std::string(what) + ": N = " + std::to_string(n) +
                                " exceeds the Fock-sector limit of " + std::to_string(kMaxFockPhotons));
    }
}

inline double factorial(unsigned k) {
    double f = 1.0;
    for (unsigned i = 2; i <= k; ++i) f *= i;
    return f;
}

inline Complex ipow(Complex base, unsigned k) {
    Complex r = 1.0;
    for (unsigned i = 0; i < k; ++i) r *= base;
    return r;
}

inline double binomial(unsigned n, unsigned k) {
    double c = 1.0;
    for (unsigned i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

} // namespace detail

/// Beam splitter restricted to the N-photon sector. The convention fixes
/// the creation-operator map:
///   bs_i_convention: a^+ -> (a^+ + i b^+)/sqrt2,  b^+ -> (i a^+ + b^+)/sqrt2
///   bs_symmetric:    a^+ -> (a^+ + b^+)/sqrt2,    b^+ -> (a^+ - b^+)/sqrt2
inline UnitaryOp beam_splitter(unsigned n, Convention convention) {
    detail::require_fock_size(n, "beam_splitter");
    const Complex i{0.0, 1.0};
    std::array<Complex, 2> map_a;  // image of a^+ as (coeff of a^+, coeff of b^+)
    std::array<Complex, 2> map_b;
    if (convention == Convention::bs_i_convention) {
        map_a = {1.0, i};
        map_b = {i, 1.0};
    } else if (convention == Convention::bs_symmetric) {
        map_a = {1.0, 1.0};
        map_b = {1.0, -1.0};
    } else {
        throw ConventionError("beam_splitter: convention '" + std::string(to_string(convention)) +
                              "' is not a beam-splitter convention");
    }

    const std::size_t dim = std::size_t{n} + 1;
    const double scale = std::pow(0.5, 0.5 * n);
    Matrix m(dim, dim);
    for (std::size_t col = 0; col < dim; ++col) {
        const unsigned nb = static_cast<unsigned>(col);
        const unsigned na = n - nb;
        // Expand (map_a)^na (map_b)^nb in powers of a^+.
        std::vector<Complex> coeff(dim);  // coeff[p]: a^{+p} b^{+(N-p)}
        for (unsigned j = 0; j <= na; ++j) {
            const Complex ta =
                detail::binomial(na, j) * detail::ipow(map_a[0], j) * detail::ipow(map_a[1], na - j);
            for (unsigned l = 0; l <= nb; ++l) {
                const Complex tb =
                    detail::binomial(nb, l) * detail::ipow(map_b[0], l) * detail::ipow(map_b[1], nb - l);
                coeff[j + l] += ta * tb;
            }
        }
        for (unsigned p = 0; p <= n; ++p) {
            const double norm = std::sqrt(detail::factorial(p) * detail::factorial(n - p) /
                                          (detail::factorial(na) * detail::factorial(nb)));
            m(n - p, col) = scale * norm * coeff[p];
        }
    }
    return UnitaryOp(Basis::fock(n), std::move(m));
}

/// |n, N-n> -> e^{i phi (N-n)} |n, N-n>: the phase sits on the second mode.
inline UnitaryOp phase_shifter(unsigned n, double phi) {
    detail::require_fock_size(n, "phase_shifter");
    const std::size_t dim = std::size_t{n} + 1;
    Matrix m(dim, dim);
    for (std::size_t k = 0; k < dim; ++k) m(k, k) = std::polar(1.0, phi * static_cast<double>(k));
    return UnitaryOp(Basis::fock(n), std::move(m));
}

/// (|N,0> + e^{i N phi}|0,N>)/sqrt2 in the N-photon sector.
inline PureState noon_fock_state(unsigned n, double phi) {
    detail::require_fock_size(n, "noon_fock_state");
    std::vector<Complex> amps(std::size_t{n} + 1);
    amps.front() = 1.0 / std::sqrt(2.0);
    amps.back() = 1.0 / std::sqrt(2.0);
    return apply(phase_shifter(n, phi), PureState(Basis::fock(n), std::move(amps)));
}

/// Raw detector statistics of one single-probe run, without any
/// convention mapping. p0 is the |0> (or mode a) detector.
inline DetectionStats raw_detection(const CircuitSpec& spec) {
    if (!is_compatible(spec.representation, spec.convention)) {
        throw ConventionError("convention '" + std::string(to_string(spec.convention)) +
                              "' does not apply to representation '" +
                              std::string(to_string(spec.representation)) + "'");
    }
    if (!std::isfinite(spec.phi)) throw InvalidArgument("run_representation: phi must be finite");

    const auto stats_of = [](const PureState& s) { return DetectionStats(std::norm(s[0]), std::norm(s[1])); };

    switch (spec.representation) {
    case Representation::hadamard: {
        const auto h = gates::hadamard();
        auto s = PureState::basis_state(Basis::qubits(1), 0);
        s = apply(h, apply(gates::phase(spec.phi), apply(h, s)));
        return stats_of(s);
    }
    case Representation::ramsey: {
        const auto pulse = gates::ry(std::numbers::pi / 2);
        auto s = PureState::basis_state(Basis::qubits(1), 0);
        s = apply(pulse, apply(gates::phase(spec.phi), apply(pulse, s)));
        return stats_of(s);
    }
    case Representation::mach_zehnder: {
        const auto bs = beam_splitter(1, spec.convention);
        auto s = fock_state(1, 1);
        s = apply(bs, apply(phase_shifter(1, spec.phi), apply(bs, s)));
        return stats_of(s);
    }
    }
    throw ConventionError("unknown representation");
}

/// Detection statistics in the Hadamard frame (see the table at the top).
inline DetectionStats run_representation(const CircuitSpec& spec) {
    const DetectionStats raw = raw_detection(spec);
    return relabels_detectors(spec.convention) ? raw.swapped() : raw;
}

/// Largest entry of |(H...H) A'_N (H...H) - A_N|.
inline double verify_eq8(unsigned n) {
    if (n < 1) throw InvalidArgument("verify_eq8: N must be >= 1");
    if (n > 8) throw ExactSizeExceeded("verify_eq8: N = " + std::to_string(n) + " exceeds 8");
    const UnitaryOp h_all = gates::hadamard_all(n);
    const Observable parity = make_observable(AnalyticTag::A_prime_N, n);
    const Observable flip_all = make_observable(AnalyticTag::A_N, n);
    const Matrix conjugated = h_all.matrix() * parity.matrix() * h_all.matrix();
    return max_abs_diff(conjugated, flip_all.matrix());
}

/// <A_N> on the NOON probe after phase accumulation; equals cos(N phi).
inline double noon_interferometer_signal(unsigned n, double phi) {
    return expectation(make_noon_probe(n, phi), make_observable(AnalyticTag::A_N, n));
}

/// The same signal read out as A'_N after a Hadamard on every qubit.
inline double noon_signal_after_hadamards(unsigned n, double phi) {
    if (n > 8) throw ExactSizeExceeded("noon_signal_after_hadamards: N = " + std::to_string(n) + " exceeds 8");
    const PureState out = apply(gates::hadamard_all(n), make_noon_probe(n, phi));
    return expectation(out, make_observable(AnalyticTag::A_prime_N, n));
}

/// Phase offset of the Fock-picture parity fringe: the signal is
/// cos(N (phi + offset)).
inline double parity_phase_offset(Convention convention) {
    return convention == Convention::bs_i_convention ? std::numbers::pi / 2 : 0.0;
}

/// Two-mode NOON state through the second beam splitter, read out as the
/// parity (-1)^{n_b} of the photon count in output mode b. Which photon
/// counts correspond to which A'_N eigenvalue is not fixed by the physics
/// alone; parity of one port is the interpretation used here.
inline double fock_parity_signal(unsigned n, double phi, Convention convention) {
    const PureState out = apply(beam_splitter(n, convention), noon_fock_state(n, phi));
    double parity = 0.0;
    for (std::size_t k = 0; k < out.dim(); ++k) parity += (k % 2 == 0 ? 1.0 : -1.0) * std::norm(out[k]);
    return parity;
}

/// fock_parity_signal with the convention offset removed; equals cos(N phi).
inline double fock_parity_signal_mapped(unsigned n, double phi, Convention convention) {
    return fock_parity_signal(n, phi - parity_phase_offset(convention), convention);
}

} // namespace noonsim
