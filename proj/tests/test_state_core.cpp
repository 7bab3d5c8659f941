#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "noonsim/metrology.hpp"
#include "noonsim/state_core.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace noonsim {
namespace {

using testing_support::amplitudes;
using testing_support::max_diff;
using testing_support::to_matrix;

PureState ket(unsigned bit) { return PureState::basis_state(Basis::qubits(1), bit); }

TEST(Tensor, BasisStatesCompose) {
    const PureState s = tensor(ket(0), ket(0));
    EXPECT_EQ(s.dim(), 4u);
    EXPECT_EQ(s[0], Complex(1.0));
    for (std::size_t i = 1; i < 4; ++i) EXPECT_EQ(s[i], Complex(0.0));
}

TEST(Tensor, PauliZPair) {
    const Observable z(Basis::qubits(1), gates::pauli_z());
    const Observable zz = tensor(z, z);
    const double expected[4] = {1, -1, -1, 1};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(zz.matrix()(i, j), Complex(i == j ? expected[i] : 0.0));
}

TEST(Tensor, HadamardPairOnZeroZero) {
    const UnitaryOp hh = tensor(gates::hadamard(), gates::hadamard());
    const PureState out = apply(hh, tensor(ket(0), ket(0)));
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(out[i] - Complex(0.5)), 0.0, 1e-15);
}

TEST(Tensor, FockOperandIsRejected) {
    const PureState fock = PureState::basis_state(Basis::fock(1), 0);
    EXPECT_THROW(tensor(ket(0), fock), BasisMismatch);
}

TEST(Tensor, ParticleOneIsMostSignificant) {
    // |1> (x) |0> is index 2 = 0b10.
    const PureState s = tensor(ket(1), ket(0));
    EXPECT_EQ(s[2], Complex(1.0));
}

TEST(Expectation, SingleParticlePhaseState) {
    const double phi = std::numbers::pi / 3;
    const PureState s(Basis::qubits(1), {1.0 / std::sqrt(2.0), std::polar(1.0 / std::sqrt(2.0), phi)});
    EXPECT_NEAR(expectation(s, make_observable(AnalyticTag::A, 1)), 0.5, 1e-15);
}

TEST(Expectation, OffDiagonalOnBasisState) {
    EXPECT_EQ(expectation(ket(0), make_observable(AnalyticTag::A, 1)), 0.0);
}

TEST(Expectation, RandomThreeQubitAgainstTripleLoop) {
    std::mt19937_64 rng(2024);
    const auto amps = oracle::random_state(8, rng);
    const auto herm = oracle::random_hermitian(8, rng);
    const double expected = oracle::expectation(amps, herm).real();
    const double got = expectation(PureState(Basis::qubits(3), amps), Observable(Basis::qubits(3), to_matrix(herm)));
    EXPECT_NEAR(got, expected, 1e-12);
}

TEST(Expectation, DimensionMismatch) {
    EXPECT_THROW(expectation(ket(0), make_observable(AnalyticTag::A_N, 2)), BasisMismatch);
}

TEST(Variance, ProductStateAtQuarterTurn) {
    const PureState s = make_separable_probe(3, std::numbers::pi / 2);
    EXPECT_NEAR(variance(s, make_observable(AnalyticTag::A_R, 3)), 3.0, 1e-12);
}

TEST(Variance, NoonStateMaximal) {
    const PureState s = make_noon_probe(4, std::numbers::pi / 8);
    EXPECT_NEAR(variance(s, make_observable(AnalyticTag::A_N, 4)), 1.0, 1e-12);
}

TEST(Variance, EigenstateHasNone) {
    const Observable z(Basis::qubits(1), gates::pauli_z());
    EXPECT_EQ(variance(ket(1), z), 0.0);
}

TEST(Variance, MatchesExplicitSquareOracle) {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        const auto amps = oracle::random_state(4, rng);
        const auto herm = oracle::random_hermitian(4, rng);
        const double got = variance(PureState(Basis::qubits(2), amps), Observable(Basis::qubits(2), to_matrix(herm)));
        EXPECT_NEAR(got, oracle::variance(amps, herm), 1e-11);
    }
}

TEST(Apply, IdentityKeepsState) {
    std::mt19937_64 rng(5);
    const PureState s(Basis::qubits(2), oracle::random_state(4, rng));
    const PureState out = apply(UnitaryOp::identity(Basis::qubits(2)), s);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(out[i], s[i]);
}

TEST(Apply, HadamardOnZero) {
    const PureState out = apply(gates::hadamard(), ket(0));
    EXPECT_NEAR(out[0].real(), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(out[1].real(), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(Apply, RandomUnitaryPreservesNorm) {
    std::mt19937_64 rng(11);
    const UnitaryOp u(Basis::qubits(2), to_matrix(oracle::random_unitary(4, rng)));
    const PureState out = apply(u, PureState(Basis::qubits(2), oracle::random_state(4, rng)));
    EXPECT_NEAR(out.norm_squared(), 1.0, 1e-12);
}

TEST(Apply, BasisMismatch) {
    EXPECT_THROW(apply(gates::hadamard(), PureState::basis_state(Basis::fock(1), 0)), BasisMismatch);
}

TEST(Constructors, RejectViolations) {
    EXPECT_THROW(PureState(Basis::qubits(1), {1.0, 1.0}), NotNormalized);
    EXPECT_THROW(PureState(Basis::qubits(1), {1.0}), BasisMismatch);
    EXPECT_THROW(PureState(Basis::qubits(1), {std::numeric_limits<double>::quiet_NaN(), 0.0}), NonFinite);
    EXPECT_THROW(Observable(Basis::qubits(1), Matrix(2, 2, {0.0, 1.0, 0.0, 0.0})), NonHermitian);
    EXPECT_THROW(Observable(Basis::qubits(1), Matrix(2, 2, {0.0, Complex(0, 1), Complex(0, 1), 0.0})), NonHermitian);
    EXPECT_THROW(UnitaryOp(Basis::qubits(1), Matrix(2, 2, {1.0, 1.0, 0.0, 1.0})), NonUnitary);
    EXPECT_THROW(Basis::qubits(15), ExactSizeExceeded);
    EXPECT_THROW(Basis::qubits(0), InvalidArgument);
}

TEST(Kron, MatchesEntryFormula) {
    std::mt19937_64 rng(3);
    const auto a = oracle::random_unitary(2, rng);
    const auto b = oracle::random_hermitian(4, rng);
    EXPECT_EQ(max_diff(kron(to_matrix(a), to_matrix(b)), oracle::kron(a, b)), 0.0);
}

// ---------------------------------------------------------------------------
// Randomized invariants: 1000 cases each, dims <= 16.

class StateCoreProperty : public ::testing::Test {
protected:
    std::mt19937_64 rng{0xC0FFEE};
    unsigned random_qubits(unsigned max_qubits = 4) {
        return std::uniform_int_distribution<unsigned>(1, max_qubits)(rng);
    }
};

TEST_F(StateCoreProperty, ApplyKeepsNormalization) {
    for (int trial = 0; trial < 1000; ++trial) {
        const unsigned q = random_qubits();
        const std::size_t dim = std::size_t{1} << q;
        const UnitaryOp u(Basis::qubits(q), to_matrix(oracle::random_unitary(dim, rng)));
        const PureState out = apply(u, PureState(Basis::qubits(q), oracle::random_state(dim, rng)));
        ASSERT_NEAR(out.norm_squared(), 1.0, kTolerance);
    }
}

TEST_F(StateCoreProperty, TensorPreservesKindInvariants) {
    for (int trial = 0; trial < 1000; ++trial) {
        const unsigned qa = random_qubits(2), qb = random_qubits(2);
        const std::size_t da = std::size_t{1} << qa, db = std::size_t{1} << qb;
        const PureState s = tensor(PureState(Basis::qubits(qa), oracle::random_state(da, rng)),
                                   PureState(Basis::qubits(qb), oracle::random_state(db, rng)));
        ASSERT_NEAR(s.norm_squared(), 1.0, kTolerance);
        const Observable o = tensor(Observable(Basis::qubits(qa), to_matrix(oracle::random_hermitian(da, rng))),
                                    Observable(Basis::qubits(qb), to_matrix(oracle::random_hermitian(db, rng))));
        ASSERT_LE(hermiticity_defect(o.matrix()), kTolerance);
        const UnitaryOp u = tensor(UnitaryOp(Basis::qubits(qa), to_matrix(oracle::random_unitary(da, rng))),
                                   UnitaryOp(Basis::qubits(qb), to_matrix(oracle::random_unitary(db, rng))));
        ASSERT_LE(unitarity_defect(u.matrix()), kTolerance);
        ASSERT_EQ(u.basis(), Basis::qubits(qa + qb));
    }
}

TEST_F(StateCoreProperty, TensorIsAssociative) {
    for (int trial = 0; trial < 1000; ++trial) {
        const unsigned qa = random_qubits(2), qb = random_qubits(1), qc = random_qubits(1);
        auto herm = [&](unsigned q) {
            return Observable(Basis::qubits(q), to_matrix(oracle::random_hermitian(std::size_t{1} << q, rng)));
        };
        const Observable a = herm(qa), b = herm(qb), c = herm(qc);
        ASSERT_LE(max_abs_diff(tensor(tensor(a, b), c).matrix(), tensor(a, tensor(b, c)).matrix()), 1e-14);

        auto state = [&](unsigned q) {
            return PureState(Basis::qubits(q), oracle::random_state(std::size_t{1} << q, rng));
        };
        const PureState x = state(qa), y = state(qb), z = state(qc);
        const auto left = tensor(tensor(x, y), z), right = tensor(x, tensor(y, z));
        for (std::size_t i = 0; i < left.dim(); ++i) ASSERT_LE(std::abs(left[i] - right[i]), 1e-14);
    }
}

TEST_F(StateCoreProperty, ExpectationMatchesOracle) {
    for (int trial = 0; trial < 1000; ++trial) {
        const unsigned q = random_qubits();
        const std::size_t dim = std::size_t{1} << q;
        const auto amps = oracle::random_state(dim, rng);
        const auto herm = oracle::random_hermitian(dim, rng);
        const double got = expectation(PureState(Basis::qubits(q), amps), Observable(Basis::qubits(q), to_matrix(herm)));
        ASSERT_NEAR(got, oracle::expectation(amps, herm).real(), 1e-12);
    }
}

TEST_F(StateCoreProperty, ConstructorsRejectPerturbedInputs) {
    std::uniform_real_distribution<double> bump(1e-9, 1e-3);
    for (int trial = 0; trial < 1000; ++trial) {
        const unsigned q = random_qubits();
        const std::size_t dim = std::size_t{1} << q;
        auto amps = oracle::random_state(dim, rng);
        const double scale = 1.0 + bump(rng);
        for (auto& a : amps) a *= scale;
        ASSERT_THROW(PureState(Basis::qubits(q), amps), NotNormalized);

        auto herm = oracle::random_hermitian(dim, rng);
        herm[0][dim - 1] += Complex(0.0, bump(rng));
        ASSERT_THROW(Observable(Basis::qubits(q), to_matrix(herm)), NonHermitian);

        auto u = oracle::random_unitary(dim, rng);
        const double col_scale = 1.0 + bump(rng);
        for (auto& row : u) row[trial % dim] *= col_scale;
        ASSERT_THROW(UnitaryOp(Basis::qubits(q), to_matrix(u)), NonUnitary);
    }
}

} // namespace
} // namespace noonsim
