#pragma once

// Test-only reference computations. Nothing here calls the library's
// numerical routines; they are written independently so the unit tests
// compare two routes to the same number.

#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using Dense = std::vector<std::vector<C>>;  // row-major, rows of equal length

inline Dense zeros(std::size_t r, std::size_t c) { return Dense(r, std::vector<C>(c)); }

inline Dense eye(std::size_t n) {
    Dense m = zeros(n, n);
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1.0;
    return m;
}

/// Kronecker product written from the entry formula
/// (A (x) B)[i][j] = A[i / rb][j / cb] * B[i % rb][j % cb].
inline Dense kron(const Dense& a, const Dense& b) {
    const std::size_t rb = b.size(), cb = b[0].size();
    const std::size_t rows = a.size() * rb, cols = a[0].size() * cb;
    Dense out = zeros(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) out[i][j] = a[i / rb][j / cb] * b[i % rb][j % cb];
    return out;
}

inline Dense add(const Dense& a, const Dense& b) {
    Dense out = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) out[i][j] += b[i][j];
    return out;
}

inline Dense matmul(const Dense& a, const Dense& b) {
    Dense out = zeros(a.size(), b[0].size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b[0].size(); ++j)
            for (std::size_t k = 0; k < b.size(); ++k) out[i][j] += a[i][k] * b[k][j];
    return out;
}

inline Dense sigma_x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
inline Dense sigma_z() { return {{1.0, 0.0}, {0.0, -1.0}}; }

/// I (x) ... (x) op (x) ... (x) I with `op` on particle k (0 = leftmost).
inline Dense on_particle(const Dense& op, unsigned k, unsigned n) {
    Dense out = {{1.0}};
    for (unsigned p = 0; p < n; ++p) out = kron(out, p == k ? op : eye(2));
    return out;
}

inline Dense tensor_power(const Dense& op, unsigned n) {
    Dense out = {{1.0}};
    for (unsigned p = 0; p < n; ++p) out = kron(out, op);
    return out;
}

/// <s|M|s> as the explicit double sum sum_ij conj(s_i) M_ij s_j.
inline C expectation(const std::vector<C>& s, const Dense& m) {
    C acc = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < s.size(); ++j) acc += std::conj(s[i]) * m[i][j] * s[j];
    return acc;
}

/// Variance as <M^2> - <M>^2 with M^2 formed explicitly.
inline double variance(const std::vector<C>& s, const Dense& m) {
    const double mean = expectation(s, m).real();
    return expectation(s, matmul(m, m)).real() - mean * mean;
}

inline std::vector<C> random_state(std::size_t dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    std::vector<C> v(dim);
    double n2 = 0.0;
    for (auto& x : v) {
        x = {g(rng), g(rng)};
        n2 += std::norm(x);
    }
    for (auto& x : v) x /= std::sqrt(n2);
    return v;
}

inline Dense random_hermitian(std::size_t dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Dense m = zeros(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m[i][i] = g(rng);
        for (std::size_t j = i + 1; j < dim; ++j) {
            m[i][j] = {g(rng), g(rng)};
            m[j][i] = std::conj(m[i][j]);
        }
    }
    return m;
}

/// Haar-ish random unitary: modified Gram-Schmidt on Gaussian columns.
inline Dense random_unitary(std::size_t dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    std::vector<std::vector<C>> cols(dim, std::vector<C>(dim));
    for (auto& c : cols)
        for (auto& x : c) x = {g(rng), g(rng)};
    for (std::size_t k = 0; k < dim; ++k) {
        for (std::size_t p = 0; p < k; ++p) {
            C dot = 0.0;
            for (std::size_t i = 0; i < dim; ++i) dot += std::conj(cols[p][i]) * cols[k][i];
            for (std::size_t i = 0; i < dim; ++i) cols[k][i] -= dot * cols[p][i];
        }
        double n2 = 0.0;
        for (const auto& x : cols[k]) n2 += std::norm(x);
        for (auto& x : cols[k]) x /= std::sqrt(n2);
    }
    Dense m = zeros(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) m[i][j] = cols[j][i];
    return m;
}

} // namespace oracle
