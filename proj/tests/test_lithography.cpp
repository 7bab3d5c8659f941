#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "noonsim/lithography.hpp"

namespace noonsim {
namespace {

// Period from the rising crossings of D = 1/2, located by linear
// interpolation. Shares nothing with the peak-based measurement.
double crossing_period(const ExposurePattern& p) {
    std::vector<double> xs;
    for (std::size_t i = 0; i + 1 < p.deposition.size(); ++i) {
        const double a = p.deposition[i] - 0.5, b = p.deposition[i + 1] - 0.5;
        if (a < 0.0 && b >= 0.0) xs.push_back(p.grid.x(i) + a / (a - b) * p.grid.spacing());
    }
    return (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
}

TEST(Litho, ClosedFormExamples) {
    EXPECT_EQ(feature_size(1, 400.0), 100.0);
    EXPECT_EQ(feature_size(2, 400.0), 50.0);
    EXPECT_EQ(fringe_period(1, 400.0), 200.0);
    EXPECT_EQ(fringe_period(4, 800.0), 100.0);
    EXPECT_EQ(deposition_at(0.0, 7, 633.0), 1.0);
    EXPECT_NEAR(deposition_at(100.0, 1, 400.0), 0.0, 1e-15);
    EXPECT_NEAR(deposition_at(25.0, 2, 400.0), 0.5, 1e-15);
}

TEST(Litho, PatternCarriesClosedForms) {
    for (auto [n, lambda] : {std::pair{1u, 400.0}, std::pair{2u, 400.0}, std::pair{4u, 800.0}}) {
        const auto p = expose({0.0, 1000.0, 4096}, n, lambda);
        EXPECT_EQ(p.feature_size, lambda / (4 * n));
        EXPECT_EQ(p.fringe_period, lambda / (2 * n));
        EXPECT_EQ(p.deposition.size(), 4096u);
    }
}

TEST(Litho, RejectsUndersampledGrid) {
    // spacing 1000/15 nm against lambda/(8N) = 12.5 nm
    EXPECT_THROW(expose({0.0, 1000.0, 16}, 4, 400.0), ResolutionError);
    EXPECT_THROW(expose({0.0, 1000.0, 8}, 1, 400.0), InvalidArgument);
    EXPECT_THROW(expose({10.0, 10.0, 64}, 1, 400.0), InvalidArgument);
    EXPECT_THROW(expose({0.0, 100.0, 64}, 0, 400.0), InvalidArgument);
    EXPECT_THROW(expose({0.0, 100.0, 64}, 1, -400.0), InvalidArgument);
}

TEST(Litho, TooShortSpanForFringes) {
    const auto p = expose({0.0, 150.0, 256}, 1, 400.0);
    EXPECT_THROW(measure_fringes(p), SpanError);
}

TEST(Litho, MeasuredPeriodWithinOneGridStep) {
    const auto p = expose({0.0, 1000.0, 4096}, 4, 800.0);
    const auto m = measure_fringes(p);
    EXPECT_LE(std::abs(m.period - 100.0), p.grid.spacing());
    EXPECT_LE(std::abs(crossing_period(p) - 100.0), p.grid.spacing());
}

TEST(Litho, IdealContrastIsOne) {
    for (unsigned n : {1u, 2u, 3u, 7u}) {
        const auto m = measure_fringes(expose({0.0, 1000.0, 4096}, n, 400.0));
        EXPECT_NEAR(m.contrast, 1.0, 1e-9) << "N=" << n;
        EXPECT_NEAR(m.fitted_period, 200.0 / n, 1e-6);
    }
}

TEST(Litho, ReducedContrastIsMeasured) {
    auto p = expose({0.0, 1000.0, 2048}, 2, 400.0);
    for (double& d : p.deposition) d = 0.25 + 0.5 * d;  // visibility 0.5
    EXPECT_NEAR(measure_fringes(p).contrast, 0.5, 1e-9);
}

TEST(Litho, PeriodShrinksWithPhotonNumber) {
    const SubstrateGrid grid{0.0, 2000.0, 8192};
    const auto one = measure_fringes(expose(grid, 1, 400.0));
    const auto five = measure_fringes(expose(grid, 5, 400.0));
    EXPECT_NEAR(one.period / five.period, 5.0, 0.05);
}

TEST(Litho, Comparison) {
    const auto cmp = compare_classical(3, 600.0, {0.0, 900.0, 1024});
    EXPECT_EQ(cmp.quantum.n_photons, 3u);
    EXPECT_EQ(cmp.classical.n_photons, 1u);
    EXPECT_EQ(cmp.classical.feature_size, 150.0);
    EXPECT_EQ(cmp.quantum.feature_size, 50.0);
    EXPECT_EQ(cmp.quantum.grid, cmp.classical.grid);

    const auto same = compare_classical(1, 600.0, {0.0, 900.0, 1024});
    EXPECT_EQ(same.quantum.deposition, same.classical.deposition);
}

// Randomized: bounds, period and the double-angle relation D_2N = (2 D_N - 1)^2.
TEST(LithoProperty, InvariantsUpToTwentyPhotons) {
    std::mt19937_64 rng(314);
    std::uniform_real_distribution<double> lambda_dist(200.0, 1000.0);
    std::uniform_int_distribution<unsigned> n_dist(1, 20);
    for (int trial = 0; trial < 200; ++trial) {
        const unsigned n = n_dist(rng);
        const double lambda = lambda_dist(rng);
        const double span = 6.0 * lambda / (2.0 * n) + lambda / 7.0;
        const auto points = static_cast<std::size_t>(std::ceil(span / (lambda / (8.0 * n)))) * 8;
        const SubstrateGrid grid{0.0, span, points};
        const auto p = expose(grid, n, lambda);
        for (double d : p.deposition) {
            ASSERT_GE(d, 0.0);
            ASSERT_LE(d, 1.0);
        }
        const auto m = measure_fringes(p);
        ASSERT_LE(std::abs(m.period - lambda / (2.0 * n)), grid.spacing());
        ASSERT_EQ(p.feature_size, lambda / (4.0 * n));

        if (n <= 10) {
            const auto doubled = expose(grid, 2 * n, lambda);
            for (std::size_t i = 0; i < points; ++i) {
                const double u = 2.0 * p.deposition[i] - 1.0;
                ASSERT_NEAR(doubled.deposition[i], u * u, 1e-12);
            }
        }
    }
}

} // namespace
} // namespace noonsim
