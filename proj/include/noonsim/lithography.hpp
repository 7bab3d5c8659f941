#pragma once

// N-photon absorption patterns on a 1-D substrate.
//
// Two counter-propagating beams of wavelength lambda give a phase
// difference phi(x) = 2 k x (k = 2 pi / lambda) along the substrate. An
// N-photon resist responds to cos(N phi), so the deposition rate is
//
//   D(x) = (1 + cos(2 N k x)) / 2,
//
// normalized to peak 1. One period lambda/(2N) holds a line and a gap, so
// the printed feature size is lambda/(4N).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "noonsim/errors.hpp"

namespace noonsim {

/// Uniform grid over [x_min, x_max] in nanometres.
struct SubstrateGrid {
    double x_min = 0.0;
    double x_max = 1.0;
    std::size_t points = 16;

    void validate() const {
        if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min)) {
            throw InvalidArgument("substrate grid needs finite x_max > x_min");
        }
        if (points < 16) throw InvalidArgument("substrate grid needs at least 16 points");
    }

    double spacing() const { return (x_max - x_min) / static_cast<double>(points - 1); }
    double x(std::size_t i) const { return x_min + static_cast<double>(i) * spacing(); }

    bool operator==(const SubstrateGrid&) const = default;
};

struct ExposurePattern {
    SubstrateGrid grid;
    unsigned n_photons = 1;
    double wavelength = 0.0;      // nm
    std::vector<double> deposition;
    double fringe_period = 0.0;   // nm
    double feature_size = 0.0;    // nm

    bool operator==(const ExposurePattern&) const = default;
};

inline double fringe_period(unsigned n, double wavelength) { return wavelength / (2.0 * n); }
inline double feature_size(unsigned n, double wavelength) { return wavelength / (4.0 * n); }

/// Deposition rate of an N-photon resist at position x (nm).
inline double deposition_at(double x, unsigned n, double wavelength) {
    const double k = 2.0 * std::numbers::pi / wavelength;
    return 0.5 * (1.0 + std::cos(2.0 * n * k * x));
}

/// Requires at least four samples per printed feature: spacing < lambda/(8N).
inline ExposurePattern expose(const SubstrateGrid& grid, unsigned n, double wavelength) {
    grid.validate();
    if (n < 1) throw InvalidArgument("expose: N must be >= 1");
    if (!(wavelength > 0.0) || !std::isfinite(wavelength)) {
        throw InvalidArgument("expose: wavelength must be positive");
    }
    const double required = wavelength / (8.0 * n);
    if (!(grid.spacing() < required)) {
        throw ResolutionError("grid spacing " + std::to_string(grid.spacing()) +
                              " nm undersamples N=" + std::to_string(n) + " at lambda=" +
                              std::to_string(wavelength) + " nm; spacing must be below lambda/(8N) = " +
                              std::to_string(required) + " nm");
    }

    ExposurePattern p;
    p.grid = grid;
    p.n_photons = n;
    p.wavelength = wavelength;
    p.deposition.resize(grid.points);
    for (std::size_t i = 0; i < grid.points; ++i) p.deposition[i] = deposition_at(grid.x(i), n, wavelength);
    p.fringe_period = fringe_period(n, wavelength);
    p.feature_size = feature_size(n, wavelength);
    return p;
}

struct FringeMeasurement {
    double period = 0.0;         // mean spacing of refined maxima, nm
    double contrast = 0.0;       // (max - min)/(max + min) of the fitted fringe
    double fitted_period = 0.0;  // period of the least-squares sinusoid, nm
    std::size_t maxima = 0;
};

namespace detail {

/// Solves the 4x4 system a x = b by Gaussian elimination with partial pivoting.
inline std::array<double, 4> solve4(std::array<std::array<double, 4>, 4> a, std::array<double, 4> b) {
    for (std::size_t col = 0; col < 4; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < 4; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        if (a[col][col] == 0.0) throw SpanError("fringe fit is singular");
        for (std::size_t r = col + 1; r < 4; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::array<double, 4> x{};
    for (std::size_t i = 4; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < 4; ++c) s -= a[i][c] * x[c];
        x[i] = s / a[i][i];
    }
    return x;
}

} // namespace detail

/// Fringe period from the mean spacing of interior maxima (each refined by
/// a parabola through its three samples), and contrast from a four-parameter
/// sinusoid fit seeded with that period. Needs at least three maxima.
inline FringeMeasurement measure_fringes(const ExposurePattern& p) {
    const auto& d = p.deposition;
    const SubstrateGrid& g = p.grid;
    if (d.size() != g.points) throw InvalidArgument("measure_fringes: pattern does not match its grid");
    const double h = g.spacing();

    std::vector<double> peaks;
    for (std::size_t i = 1; i + 1 < d.size(); ++i) {
        if (d[i] > d[i - 1] && d[i] >= d[i + 1]) {
            const double curv = d[i - 1] - 2.0 * d[i] + d[i + 1];
            const double offset = curv != 0.0 ? 0.5 * (d[i - 1] - d[i + 1]) / curv : 0.0;
            peaks.push_back(g.x(i) + offset * h);
        }
    }
    if (peaks.size() < 3) {
        throw SpanError("pattern shows " + std::to_string(peaks.size()) +
                        " fringe maxima; at least 3 are needed");
    }

    FringeMeasurement m;
    m.maxima = peaks.size();
    m.period = (peaks.back() - peaks.front()) / static_cast<double>(peaks.size() - 1);

    // Fit D = a + b cos(w t) + c sin(w t) with t = (x - mid)/half in [-1, 1].
    const double mid = 0.5 * (g.x_min + g.x_max);
    const double half = 0.5 * (g.x_max - g.x_min);
    double w = 2.0 * std::numbers::pi / m.period * half;
    std::array<double, 3> abc{};
    for (int iter = 0; iter < 50; ++iter) {
        std::array<std::array<double, 4>, 4> ata{};
        std::array<double, 4> aty{};
        for (std::size_t i = 0; i < d.size(); ++i) {
            const double t = (g.x(i) - mid) / half;
            const double cw = std::cos(w * t), sw = std::sin(w * t);
            const double resid = d[i] - (abc[0] + abc[1] * cw + abc[2] * sw);
            const std::array<double, 4> row{1.0, cw, sw, t * (-abc[1] * sw + abc[2] * cw)};
            for (std::size_t r = 0; r < 4; ++r) {
                aty[r] += row[r] * resid;
                for (std::size_t c = 0; c < 4; ++c) ata[r][c] += row[r] * row[c];
            }
        }
        if (iter == 0) {
            // First pass: linear solve for a, b, c at the peak-spacing frequency.
            ata[3] = {0.0, 0.0, 0.0, 1.0};
            ata[0][3] = ata[1][3] = ata[2][3] = 0.0;
            aty[3] = 0.0;
        }
        const auto step = detail::solve4(ata, aty);
        abc[0] += step[0];
        abc[1] += step[1];
        abc[2] += step[2];
        w += step[3];
        if (iter > 0 && std::abs(step[3]) <= 1e-15 * std::abs(w)) break;
    }

    const double amplitude = std::hypot(abc[1], abc[2]);
    m.contrast = abc[0] > 0.0 ? amplitude / abc[0] : 0.0;
    m.fitted_period = 2.0 * std::numbers::pi * half / w;
    return m;
}

struct ExposureComparison {
    ExposurePattern quantum;
    ExposurePattern classical;
};

/// The N-photon pattern and the single-photon pattern on the same grid.
inline ExposureComparison compare_classical(unsigned n, double wavelength, const SubstrateGrid& grid) {
    return {expose(grid, n, wavelength), expose(grid, 1, wavelength)};
}

} // namespace noonsim
