#pragma once

// Dense complex state vectors and operators over a qubit register or a
// fixed-photon-number two-mode Fock sector.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "noonsim/errors.hpp"

namespace noonsim {

using Complex = std::complex<double>;

/// Tolerance for every structural check (normalization, Hermiticity,
/// unitarity, imaginary residue of expectation values).
inline constexpr double kTolerance = 1e-12;

/// Largest register the dense core will build (dimension 2^14).
inline constexpr unsigned kMaxRegisterQubits = 14;

enum class BasisFamily { qubit_register, fock_sector };

/// Qubit registers order particle 1 as the most significant bit of the
/// basis index. Fock sectors index |n, N-n> by the photon count N-n in
/// the second mode, so index 0 is |N,0> and index N is |0,N>.
struct Basis {
    BasisFamily family = BasisFamily::qubit_register;
    unsigned n = 1;

    static Basis qubits(unsigned count) {
        if (count == 0) {
            throw InvalidArgument("qubit register needs at least one qubit");
        }
        if (count > kMaxRegisterQubits) {
            throw ExactSizeExceeded("qubit register of " + std::to_string(count) +
                                    " qubits exceeds the dense limit of " +
                                    std::to_string(kMaxRegisterQubits));
        }
        return {BasisFamily::qubit_register, count};
    }

    static Basis fock(unsigned photons) {
        return {BasisFamily::fock_sector, photons};
    }

    std::size_t dim() const {
        return family == BasisFamily::qubit_register ? (std::size_t{1} << n)
                                                     : std::size_t{n} + 1;
    }

    std::string to_string() const {
        return (family == BasisFamily::qubit_register ? "qubit-register(" : "fock-sector(") +
               std::to_string(n) + ")";
    }

    bool operator==(const Basis&) const = default;
};

namespace detail {

inline void require_finite(std::span<const Complex> values, const char* what) {
    for (const auto& v : values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw NonFinite(std::string(what) + " contains a non-finite entry");
        }
    }
}

inline void require_same_basis(const Basis& a, const Basis& b) {
    if (a != b) {
        throw BasisMismatch("basis mismatch: " + a.to_string() + " vs " + b.to_string());
    }
}

} // namespace detail

/// Square or rectangular dense complex matrix, row-major.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<Complex> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_) {
            throw InvalidArgument("matrix data size does not match its shape");
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const Complex> data() const { return data_; }

    Matrix adjoint() const {
        Matrix out(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
        return out;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw InvalidArgument("matrix product shape mismatch");
        Matrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            Complex* orow = &out.data_[i * out.cols_];
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Complex aik = a(i, k);
                if (aik == Complex{}) continue;
                const Complex* brow = &b.data_[k * b.cols_];
                for (std::size_t j = 0; j < b.cols_; ++j) orow[j] += aik * brow[j];
            }
        }
        return out;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
            throw InvalidArgument("matrix sum shape mismatch");
        }
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
        return a;
    }

    std::vector<Complex> apply(std::span<const Complex> v) const {
        if (v.size() != cols_) throw InvalidArgument("matrix-vector shape mismatch");
        std::vector<Complex> out(rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            Complex acc{};
            const Complex* row = &data_[r * cols_];
            for (std::size_t c = 0; c < cols_; ++c) acc += row[c] * v[c];
            out[r] = acc;
        }
        return out;
    }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw InvalidArgument("max_abs_diff shape mismatch");
    }
    double worst = 0.0;
    auto da = a.data();
    auto db = b.data();
    for (std::size_t i = 0; i < da.size(); ++i) worst = std::max(worst, std::abs(da[i] - db[i]));
    return worst;
}

/// Kronecker product; the left operand indexes the high-order block.
inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ar = 0; ar < a.rows(); ++ar)
        for (std::size_t ac = 0; ac < a.cols(); ++ac) {
            const Complex x = a(ar, ac);
            if (x == Complex{}) continue;
            for (std::size_t br = 0; br < b.rows(); ++br)
                for (std::size_t bc = 0; bc < b.cols(); ++bc)
                    out(ar * b.rows() + br, ac * b.cols() + bc) = x * b(br, bc);
        }
    return out;
}

inline std::vector<Complex> kron(std::span<const Complex> a, std::span<const Complex> b) {
    std::vector<Complex> out;
    out.reserve(a.size() * b.size());
    for (const auto& x : a)
        for (const auto& y : b) out.push_back(x * y);
    return out;
}

/// Largest |(M^dagger M - I)_ij|.
inline double unitarity_defect(const Matrix& m) {
    return max_abs_diff(m.adjoint() * m, Matrix::identity(m.cols()));
}

inline double hermiticity_defect(const Matrix& m) {
    double worst = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = r; c < m.cols(); ++c)
            worst = std::max(worst, std::abs(m(r, c) - std::conj(m(c, r))));
    return worst;
}

/// Normalized pure state. Immutable once constructed.
class PureState {
public:
    PureState(Basis basis, std::vector<Complex> amplitudes)
        : basis_(basis), amplitudes_(std::move(amplitudes)) {
        if (amplitudes_.size() != basis_.dim()) {
            throw BasisMismatch("state of dimension " + std::to_string(amplitudes_.size()) +
                                " does not fit " + basis_.to_string());
        }
        detail::require_finite(amplitudes_, "state");
        double norm2 = 0.0;
        for (const auto& a : amplitudes_) norm2 += std::norm(a);
        if (std::abs(norm2 - 1.0) > kTolerance) {
            throw NotNormalized("state norm^2 = " + std::to_string(norm2));
        }
    }

    /// Rescales `amplitudes` to unit norm before validating.
    static PureState normalized(Basis basis, std::vector<Complex> amplitudes) {
        double norm2 = 0.0;
        for (const auto& a : amplitudes) norm2 += std::norm(a);
        if (!(norm2 > 0.0) || !std::isfinite(norm2)) {
            throw InvalidArgument("cannot normalize a zero or non-finite vector");
        }
        const double scale = 1.0 / std::sqrt(norm2);
        for (auto& a : amplitudes) a *= scale;
        return PureState(basis, std::move(amplitudes));
    }

    static PureState basis_state(Basis basis, std::size_t index) {
        if (index >= basis.dim()) throw InvalidArgument("basis index out of range");
        std::vector<Complex> amps(basis.dim());
        amps[index] = 1.0;
        return PureState(basis, std::move(amps));
    }

    const Basis& basis() const { return basis_; }
    std::size_t dim() const { return amplitudes_.size(); }
    std::span<const Complex> amplitudes() const { return amplitudes_; }
    const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }

    double norm_squared() const {
        double s = 0.0;
        for (const auto& a : amplitudes_) s += std::norm(a);
        return s;
    }

private:
    Basis basis_;
    std::vector<Complex> amplitudes_;
};

/// Which named operator an Observable represents; `custom` for anything else.
enum class AnalyticTag { A, A_R, A_N, A_prime_N, custom };

class Observable {
public:
    Observable(Basis basis, Matrix matrix, AnalyticTag tag = AnalyticTag::custom)
        : basis_(basis), matrix_(std::move(matrix)), tag_(tag) {
        if (matrix_.rows() != basis_.dim() || matrix_.cols() != basis_.dim()) {
            throw BasisMismatch("observable shape does not fit " + basis_.to_string());
        }
        detail::require_finite(matrix_.data(), "observable");
        const double defect = hermiticity_defect(matrix_);
        if (defect > kTolerance) {
            throw NonHermitian("observable is not Hermitian (defect " + std::to_string(defect) + ")");
        }
    }

    const Basis& basis() const { return basis_; }
    const Matrix& matrix() const { return matrix_; }
    AnalyticTag tag() const { return tag_; }
    std::size_t dim() const { return matrix_.rows(); }

private:
    Basis basis_;
    Matrix matrix_;
    AnalyticTag tag_;
};

class UnitaryOp {
public:
    UnitaryOp(Basis basis, Matrix matrix) : basis_(basis), matrix_(std::move(matrix)) {
        if (matrix_.rows() != basis_.dim() || matrix_.cols() != basis_.dim()) {
            throw BasisMismatch("operator shape does not fit " + basis_.to_string());
        }
        detail::require_finite(matrix_.data(), "operator");
        const double defect = unitarity_defect(matrix_);
        if (defect > kTolerance) {
            throw NonUnitary("operator is not unitary (defect " + std::to_string(defect) + ")");
        }
    }

    static UnitaryOp identity(Basis basis) { return {basis, Matrix::identity(basis.dim())}; }

    const Basis& basis() const { return basis_; }
    const Matrix& matrix() const { return matrix_; }
    std::size_t dim() const { return matrix_.rows(); }

    /// Operator product (*this) * rhs, i.e. rhs acts first.
    UnitaryOp then_after(const UnitaryOp& rhs) const {
        detail::require_same_basis(basis_, rhs.basis_);
        return {basis_, matrix_ * rhs.matrix_};
    }

private:
    Basis basis_;
    Matrix matrix_;
};

namespace detail {

inline Basis tensor_basis(const Basis& a, const Basis& b) {
    if (a.family != BasisFamily::qubit_register || b.family != BasisFamily::qubit_register) {
        throw BasisMismatch("tensor requires qubit-register operands, got " + a.to_string() +
                            " and " + b.to_string());
    }
    return Basis::qubits(a.n + b.n);
}

} // namespace detail

inline PureState tensor(const PureState& a, const PureState& b) {
    const Basis basis = detail::tensor_basis(a.basis(), b.basis());
    return PureState(basis, kron(a.amplitudes(), b.amplitudes()));
}

inline Observable tensor(const Observable& a, const Observable& b) {
    const Basis basis = detail::tensor_basis(a.basis(), b.basis());
    return {basis, kron(a.matrix(), b.matrix())};
}

inline UnitaryOp tensor(const UnitaryOp& a, const UnitaryOp& b) {
    const Basis basis = detail::tensor_basis(a.basis(), b.basis());
    return {basis, kron(a.matrix(), b.matrix())};
}

/// <s|o|s>. Throws NonHermitian if the imaginary residue reaches kTolerance.
inline double expectation(const PureState& s, const Observable& o) {
    detail::require_same_basis(s.basis(), o.basis());
    const auto os = o.matrix().apply(s.amplitudes());
    Complex acc{};
    for (std::size_t i = 0; i < os.size(); ++i) acc += std::conj(s[i]) * os[i];
    if (std::abs(acc.imag()) >= kTolerance) {
        throw NonHermitian("expectation has imaginary residue " + std::to_string(acc.imag()));
    }
    return acc.real();
}

/// <o^2> - <o>^2, evaluated as ||(o - <o>) s||^2 so the result cannot go negative.
inline double variance(const PureState& s, const Observable& o) {
    detail::require_same_basis(s.basis(), o.basis());
    const auto os = o.matrix().apply(s.amplitudes());
    Complex mean{};
    for (std::size_t i = 0; i < os.size(); ++i) mean += std::conj(s[i]) * os[i];
    if (std::abs(mean.imag()) >= kTolerance) {
        throw NonHermitian("expectation has imaginary residue " + std::to_string(mean.imag()));
    }
    double var = 0.0;
    for (std::size_t i = 0; i < os.size(); ++i) var += std::norm(os[i] - mean.real() * s[i]);
    return var;
}

inline PureState apply(const UnitaryOp& u, const PureState& s) {
    detail::require_same_basis(u.basis(), s.basis());
    return PureState(s.basis(), u.matrix().apply(s.amplitudes()));
}

/// Single-qubit building blocks.
namespace gates {

inline Matrix pauli_x() { return Matrix(2, 2, {0.0, 1.0, 1.0, 0.0}); }
inline Matrix pauli_z() { return Matrix(2, 2, {1.0, 0.0, 0.0, -1.0}); }

inline Matrix hadamard_matrix() {
    const double r = 1.0 / std::sqrt(2.0);
    return Matrix(2, 2, {r, r, r, -r});
}

inline UnitaryOp hadamard() { return {Basis::qubits(1), hadamard_matrix()}; }

/// |1> picks up e^{i phi}; |0> is untouched.
inline UnitaryOp phase(double phi) {
    return {Basis::qubits(1), Matrix(2, 2, {1.0, 0.0, 0.0, std::polar(1.0, phi)})};
}

/// exp(-i theta sigma_y / 2).
inline UnitaryOp ry(double theta) {
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    return {Basis::qubits(1), Matrix(2, 2, {c, -s, s, c})};
}

/// H applied to every qubit of an n-qubit register.
inline UnitaryOp hadamard_all(unsigned n) {
    Matrix m = hadamard_matrix();
    for (unsigned k = 1; k < n; ++k) m = kron(m, hadamard_matrix());
    return {Basis::qubits(n), std::move(m)};
}

} // namespace gates

} // namespace noonsim
