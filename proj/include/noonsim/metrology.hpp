#pragma once

// Probe states (separable product and NOON) and the named observables
// measured on them, plus closed-form mean/variance/slope of each signal.
//
// A note on A_R: it is built as the sum over particles of sigma_x acting on
// particle k. Its square is not the identity once N > 1, so its variance is
// always computed from the matrix; on the product probe the cross terms
// cancel and the result is still N sin^2(phi).

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "noonsim/errors.hpp"
#include "noonsim/state_core.hpp"

namespace noonsim {

enum class Protocol { separable, noon };

inline std::string_view to_string(Protocol p) {
    return p == Protocol::separable ? "separable" : "noon";
}

inline Protocol parse_protocol(std::string_view s) {
    if (s == "separable") return Protocol::separable;
    if (s == "noon") return Protocol::noon;
    throw InvalidArgument("unknown protocol '" + std::string(s) + "'");
}

/// Particle count up to which probes and observables are built as dense
/// matrices. Larger N is only reachable through AnalyticSignal.
inline constexpr unsigned kMaxExactParticles = 12;

struct ProbeSpec {
    Protocol protocol = Protocol::separable;
    unsigned n_particles = 1;
    double phase = 0.0;

    void validate() const {
        if (n_particles < 1) throw InvalidArgument("n_particles must be >= 1");
        if (!std::isfinite(phase)) throw InvalidArgument("phase must be finite");
    }
};

namespace detail {

inline void require_exact_size(unsigned n, const char* what) {
    if (n < 1) throw InvalidArgument(std::string(what) + ": N must be >= 1");
    if (n > kMaxExactParticles) {
        throw ExactSizeExceeded(std::string(what) + ": N = " + std::to_string(n) +
                                " exceeds the exact-construction limit of " +
                                std::to_string(kMaxExactParticles) +
                                "; use analytic_signal for larger N");
    }
}

} // namespace detail

/// N copies of (|0> + e^{i phi}|1>)/sqrt(2). The amplitude of basis index
/// i is e^{i phi popcount(i)} / 2^{N/2}.
inline PureState make_separable_probe(unsigned n, double phi) {
    detail::require_exact_size(n, "make_separable_probe");
    const Basis basis = Basis::qubits(n);
    const std::size_t dim = basis.dim();
    const double r = 1.0 / std::sqrt(static_cast<double>(dim));
    std::vector<Complex> amps(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        amps[i] = std::polar(r, phi * std::popcount(i));
    }
    return PureState(basis, std::move(amps));
}

/// (|0...0> + e^{i N phi}|1...1>)/sqrt(2).
inline PureState make_noon_probe(unsigned n, double phi) {
    detail::require_exact_size(n, "make_noon_probe");
    const Basis basis = Basis::qubits(n);
    std::vector<Complex> amps(basis.dim());
    const double r = 1.0 / std::sqrt(2.0);
    amps.front() = r;
    amps.back() = std::polar(r, n * phi);
    return PureState(basis, std::move(amps));
}

inline PureState make_probe(const ProbeSpec& spec) {
    spec.validate();
    return spec.protocol == Protocol::separable ? make_separable_probe(spec.n_particles, spec.phase)
                                                : make_noon_probe(spec.n_particles, spec.phase);
}

/// Builds A (single particle, N must be 1), A_R = sum_k sigma_x^(k),
/// A_N = prod_k sigma_x^(k) or A'_N = prod_k sigma_z^(k).
inline Observable make_observable(AnalyticTag tag, unsigned n) {
    detail::require_exact_size(n, "make_observable");
    const Basis basis = Basis::qubits(n);
    const std::size_t dim = basis.dim();
    Matrix m(dim, dim);
    switch (tag) {
    case AnalyticTag::A:
        if (n != 1) throw InvalidArgument("observable A acts on a single particle; use N = 1");
        m = gates::pauli_x();
        break;
    case AnalyticTag::A_R:
        for (std::size_t i = 0; i < dim; ++i)
            for (unsigned k = 0; k < n; ++k) m(i, i ^ (std::size_t{1} << k)) = 1.0;
        break;
    case AnalyticTag::A_N:
        for (std::size_t i = 0; i < dim; ++i) m(i, i ^ (dim - 1)) = 1.0;
        break;
    case AnalyticTag::A_prime_N:
        for (std::size_t i = 0; i < dim; ++i) m(i, i) = (std::popcount(i) % 2 == 0) ? 1.0 : -1.0;
        break;
    case AnalyticTag::custom:
        throw InvalidArgument("make_observable cannot build a custom observable");
    }
    return Observable(basis, std::move(m), tag);
}

/// The observable each protocol reads out: A_R for separable, A_N for NOON.
inline Observable make_protocol_observable(Protocol protocol, unsigned n) {
    return make_observable(protocol == Protocol::separable ? AnalyticTag::A_R : AnalyticTag::A_N, n);
}

/// Closed-form signal of a protocol at particle number N.
///   separable: <A_R> = N cos phi,  (dA_R)^2 = N sin^2 phi,  d<A_R>/dphi = -N sin phi
///   noon:      <A_N> = cos N phi,  (dA_N)^2 = sin^2 N phi,  d<A_N>/dphi = -N sin N phi
struct AnalyticSignal {
    Protocol protocol = Protocol::separable;
    unsigned n = 1;

    double mean(double phi) const {
        return protocol == Protocol::separable ? n * std::cos(phi) : std::cos(n * phi);
    }
    double variance(double phi) const {
        if (protocol == Protocol::separable) {
            const double s = std::sin(phi);
            return n * s * s;
        }
        const double s = std::sin(n * phi);
        return s * s;
    }
    double derivative(double phi) const {
        return protocol == Protocol::separable ? -(n * std::sin(phi)) : -(n * std::sin(n * phi));
    }
};

inline AnalyticSignal analytic_signal(Protocol protocol, unsigned n) {
    if (n < 1) throw InvalidArgument("analytic_signal: N must be >= 1");
    return {protocol, n};
}

} // namespace noonsim
