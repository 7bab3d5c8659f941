#pragma once

// Experiment runners behind the command-line tool. Each takes fully
// resolved parameters and returns its result record together with the
// table that gets written to disk.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "noonsim/estimation.hpp"
#include "noonsim/io.hpp"
#include "noonsim/lithography.hpp"
#include "noonsim/rosetta.hpp"

namespace noonsim::experiments {

/// Parses "1,2,4,8" into strictly increasing positive integers.
inline std::vector<unsigned> parse_n_list(std::string_view text) {
    std::vector<unsigned> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const auto token = text.substr(pos, comma == std::string_view::npos ? text.size() - pos : comma - pos);
        std::uint64_t v = 0;
        try {
            v = io::parse_u64(token);
        } catch (const InvalidArgument&) {
            throw InvalidArgument("bad N value '" + std::string(token) + "'");
        }
        if (v < 1 || v > 0xFFFFFFFFu) throw InvalidArgument("bad N value '" + std::string(token) + "'");
        if (!out.empty() && v <= out.back()) {
            throw InvalidArgument("N values must be strictly increasing at '" + std::string(token) + "'");
        }
        out.push_back(static_cast<unsigned>(v));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

// --- sensitivity -----------------------------------------------------------

struct SensitivityParams {
    Protocol protocol = Protocol::noon;
    std::vector<unsigned> n_values{1};
    double phi = 1.0;
    DerivativeMode mode = DerivativeMode::closed_form;
};

inline io::Table run_sensitivity(const SensitivityParams& p) {
    std::vector<SensitivityReport> reports;
    for (unsigned n : p.n_values) reports.push_back(sensitivity(p.protocol, n, p.phi, p.mode));
    return io::to_table(reports);
}

// --- scaling ----------------------------------------------------------------

enum class ScalingMode { closed_form, numeric_derivative, montecarlo };

inline ScalingMode parse_scaling_mode(std::string_view s) {
    if (s == "closed_form") return ScalingMode::closed_form;
    if (s == "numeric_derivative") return ScalingMode::numeric_derivative;
    if (s == "montecarlo") return ScalingMode::montecarlo;
    throw InvalidArgument("unknown scaling mode '" + std::string(s) + "'");
}

struct ScalingParams {
    Protocol protocol = Protocol::noon;
    std::vector<unsigned> n_values;
    ScalingMode mode = ScalingMode::closed_form;
    double phi = 1.0;               // analytic modes only
    std::size_t batches = 2000;     // Monte Carlo only
    std::size_t shots = 1000;       // outcomes per batch, Monte Carlo only
    std::uint64_t seed = 0;
    unsigned workers = 0;
};

struct ScalingRun {
    ScalingFit fit;
    io::Table table;
};

/// Monte Carlo mode samples each N at optimal_phase(protocol, N) and uses
/// the batch spread of phi_hat as delta_phi.
inline ScalingRun run_scaling(const ScalingParams& p) {
    ScalingRun run;
    if (p.mode == ScalingMode::montecarlo) {
        auto mc = montecarlo_scaling(p.protocol, p.n_values, p.batches, p.shots, p.seed, p.workers);
        run.fit = std::move(mc.fit);
        run.table = io::to_table(run.fit);
        run.table.columns.push_back("phi");
        for (std::size_t i = 0; i < run.table.rows.size(); ++i) {
            run.table.rows[i].push_back(mc.records[i].phi_true);
        }
    } else {
        const auto mode = p.mode == ScalingMode::closed_form ? DerivativeMode::closed_form
                                                             : DerivativeMode::numeric_derivative;
        run.fit = fit_scaling(p.protocol, p.n_values, p.phi, mode);
        run.table = io::to_table(run.fit);
    }
    return run;
}

// --- montecarlo --------------------------------------------------------------

struct MonteCarloParams {
    Protocol protocol = Protocol::noon;
    unsigned n = 1;
    std::optional<double> phi;   // defaults to optimal_phase
    std::size_t batches = 2000;
    std::size_t shots = 1000;
    std::uint64_t seed = 0;
    unsigned workers = 0;
};

inline MeasurementRecord run_montecarlo(const MonteCarloParams& p) {
    const double phi = p.phi.value_or(optimal_phase(p.protocol, p.n));
    return sample_measurements(p.protocol, p.n, phi, p.batches, p.shots, p.seed, p.workers);
}

// --- rosetta -----------------------------------------------------------------

/// Largest deviation tolerated between representations before the run
/// reports a contract violation.
inline constexpr double kRosettaContract = 1e-9;
inline constexpr double kConjugationContract = 1e-12;

struct RosettaRow {
    double phi = 0.0;
    double p0_mz = 0.0;
    double p0_ramsey_mapped = 0.0;
    double p0_hadamard = 0.0;
    double max_dev = 0.0;
};

struct RosettaRun {
    std::vector<RosettaRow> rows;
    std::map<unsigned, double> conjugation_deviation;  // N -> max entrywise deviation
    bool within_contract = true;
    io::Table table;
};

/// Sweeps phi over `points` values in [0, 2 pi) through all three
/// representations, Mach-Zehnder using `mz_convention`. With `conjugation_max_n`
/// set, also checks the Hadamard conjugation identity for N = 1..conjugation_max_n.
inline RosettaRun run_rosetta(std::size_t points, Convention mz_convention = Convention::bs_i_convention,
                              unsigned conjugation_max_n = 0) {
    if (points < 8) throw InvalidArgument("rosetta needs at least 8 grid points");
    RosettaRun run;
    for (std::size_t i = 0; i < points; ++i) {
        const double phi = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(points);
        RosettaRow row;
        row.phi = phi;
        row.p0_mz = run_representation({Representation::mach_zehnder, phi, mz_convention}).p0;
        row.p0_ramsey_mapped = run_representation({Representation::ramsey, phi, Convention::ry_pulse}).p0;
        row.p0_hadamard = run_representation({Representation::hadamard, phi, Convention::hadamard_exact}).p0;
        row.max_dev = std::max({std::abs(row.p0_mz - row.p0_hadamard),
                                std::abs(row.p0_ramsey_mapped - row.p0_hadamard),
                                std::abs(row.p0_mz - row.p0_ramsey_mapped)});
        if (!(row.max_dev <= kRosettaContract)) run.within_contract = false;
        run.rows.push_back(row);
    }
    for (unsigned n = 1; n <= conjugation_max_n; ++n) {
        const double dev = verify_eq8(n);
        run.conjugation_deviation[n] = dev;
        if (!(dev < kConjugationContract)) run.within_contract = false;
    }

    auto& t = run.table;
    t.add_header("mz_convention", std::string(to_string(mz_convention)));
    t.add_header("ramsey_mapping", "swap_detectors");
    t.add_header("mz_mapping", relabels_detectors(mz_convention) ? "swap_detectors" : "identity");
    t.columns = {"phi", "p0_mz", "p0_ramsey_mapped", "p0_hadamard", "max_dev"};
    double worst = 0.0;
    for (const auto& r : run.rows) {
        t.rows.push_back({r.phi, r.p0_mz, r.p0_ramsey_mapped, r.p0_hadamard, r.max_dev});
        worst = std::max(worst, r.max_dev);
    }
    t.add_footer("max_dev", worst);
    for (const auto& [n, dev] : run.conjugation_deviation) t.add_footer("conjugation_dev_N" + std::to_string(n), dev);
    return run;
}

inline std::vector<RosettaRow> rosetta_rows_from_table(const io::Table& t) {
    std::vector<RosettaRow> out;
    const auto a = t.column_index("phi"), b = t.column_index("p0_mz"), c = t.column_index("p0_ramsey_mapped"),
               d = t.column_index("p0_hadamard"), e = t.column_index("max_dev");
    for (const auto& r : t.rows) out.push_back({r[a], r[b], r[c], r[d], r[e]});
    return out;
}

// --- litho -------------------------------------------------------------------

struct LithoParams {
    unsigned n = 2;
    double lambda_nm = 400.0;
    double span_nm = 1000.0;
    std::size_t points = 4096;
};

struct LithoRun {
    ExposureComparison patterns;
    std::optional<FringeMeasurement> quantum_fringes;
    std::optional<FringeMeasurement> classical_fringes;
    io::Table table;
};

/// Exposes [0, span] and, when the span holds enough fringes, records the
/// measured periods next to the closed-form ones.
inline LithoRun run_litho(const LithoParams& p) {
    const SubstrateGrid grid{0.0, p.span_nm, p.points};
    LithoRun run{compare_classical(p.n, p.lambda_nm, grid), std::nullopt, std::nullopt, {}};
    try {
        run.quantum_fringes = measure_fringes(run.patterns.quantum);
    } catch (const SpanError&) {
    }
    try {
        run.classical_fringes = measure_fringes(run.patterns.classical);
    } catch (const SpanError&) {
    }
    run.table = io::to_table(run.patterns);
    if (run.quantum_fringes) {
        run.table.add_footer("measured_period_nm", run.quantum_fringes->period);
        run.table.add_footer("contrast", run.quantum_fringes->contrast);
    }
    if (run.classical_fringes) {
        run.table.add_footer("classical_measured_period_nm", run.classical_fringes->period);
    }
    return run;
}

/// Self-contained SVG line plot of both deposition curves.
inline std::string render_svg(const ExposureComparison& cmp) {
    constexpr double width = 800.0, height = 300.0, margin = 40.0;
    const auto& g = cmp.quantum.grid;
    const auto px = [&](double x) { return margin + (x - g.x_min) / (g.x_max - g.x_min) * (width - 2 * margin); };
    const auto py = [&](double y) { return height - margin - y * (height - 2 * margin); };
    const auto polyline = [&](const std::vector<double>& d, const char* color) {
        std::ostringstream os;
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1\" points=\"";
        for (std::size_t i = 0; i < d.size(); ++i) os << (i ? " " : "") << px(g.x(i)) << ',' << py(d[i]);
        os << "\"/>\n";
        return os.str();
    };
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<line x1=\"" << margin << "\" y1=\"" << py(0) << "\" x2=\"" << width - margin << "\" y2=\"" << py(0)
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << margin << "\" y1=\"" << py(0) << "\" x2=\"" << margin << "\" y2=\"" << py(1)
        << "\" stroke=\"black\"/>\n";
    svg << polyline(cmp.classical.deposition, "#999999");
    svg << polyline(cmp.quantum.deposition, "#c0392b");
    svg << "<text x=\"" << margin << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"12\">N="
        << cmp.quantum.n_photons << " lambda=" << cmp.quantum.wavelength
        << " nm  feature=" << cmp.quantum.feature_size << " nm (classical " << cmp.classical.feature_size
        << " nm)</text>\n";
    svg << "<text x=\"" << margin << "\" y=\"" << height - 10 << "\" font-family=\"sans-serif\" font-size=\"12\">x ["
        << g.x_min << ", " << g.x_max << "] nm</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

} // namespace noonsim::experiments
