#pragma once

// Tabular result files and their readers.
//
// CSV dialect: '#'-prefixed "key=value" metadata lines, one header row of
// column names, comma-separated data rows, optional '#' footer lines after
// the data. '.' decimal point, LF line endings, doubles printed with 17
// significant digits so every value parses back bit-exactly.
//
// JSON layout: {"header": {...}, "columns": [...], "rows": [[...], ...],
// "footer": {...}} with metadata values as strings.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <cctype>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "noonsim/errors.hpp"
#include "noonsim/estimation.hpp"
#include "noonsim/lithography.hpp"
#include "noonsim/metrology.hpp"

namespace noonsim::io {

using Metadata = std::vector<std::pair<std::string, std::string>>;

inline std::string format_double(double v) {
    char buf[32];
    const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf, static_cast<std::size_t>(len));
}

inline double parse_double(std::string_view s) {
    // from_chars rejects a leading '+'; accept it for hand-written files.
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw InvalidArgument("cannot parse '" + std::string(s) + "' as a number");
    }
    return v;
}

inline std::uint64_t parse_u64(std::string_view s) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw InvalidArgument("cannot parse '" + std::string(s) + "' as an unsigned integer");
    }
    return v;
}

struct Table {
    Metadata header;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    Metadata footer;

    void add_header(std::string key, std::string value) { header.emplace_back(std::move(key), std::move(value)); }
    void add_header(std::string key, double value) { add_header(std::move(key), format_double(value)); }
    void add_footer(std::string key, double value) { footer.emplace_back(std::move(key), format_double(value)); }

    /// Looks a key up in the header, then the footer.
    std::optional<std::string> find(std::string_view key) const {
        for (const auto& [k, v] : header)
            if (k == key) return v;
        for (const auto& [k, v] : footer)
            if (k == key) return v;
        return std::nullopt;
    }

    std::string get(std::string_view key) const {
        auto v = find(key);
        if (!v) throw InvalidArgument("table has no metadata key '" + std::string(key) + "'");
        return *v;
    }

    double get_double(std::string_view key) const { return parse_double(get(key)); }

    std::size_t column_index(std::string_view name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return i;
        throw InvalidArgument("table has no column '" + std::string(name) + "'");
    }

    std::vector<double> column(std::string_view name) const {
        const std::size_t c = column_index(name);
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.push_back(r.at(c));
        return out;
    }

    bool operator==(const Table&) const = default;
};

inline void write_csv(std::ostream& os, const Table& t) {
    for (const auto& [k, v] : t.header) os << "# " << k << '=' << v << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
        os << '\n';
    }
    for (const auto& [k, v] : t.footer) os << "# " << k << '=' << v << '\n';
}

inline Table read_csv(std::istream& is) {
    Table t;
    bool have_columns = false;
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            std::string_view body(line);
            body.remove_prefix(1);
            if (!body.empty() && body.front() == ' ') body.remove_prefix(1);
            const auto eq = body.find('=');
            if (eq == std::string_view::npos) continue;  // free-form comment
            auto& target = have_columns ? t.footer : t.header;
            target.emplace_back(std::string(body.substr(0, eq)), std::string(body.substr(eq + 1)));
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!have_columns) {
            t.columns = std::move(cells);
            have_columns = true;
            continue;
        }
        if (cells.size() != t.columns.size()) {
            throw InvalidArgument("csv row has " + std::to_string(cells.size()) + " cells, expected " +
                                  std::to_string(t.columns.size()));
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) row.push_back(parse_double(c));
        t.rows.push_back(std::move(row));
    }
    if (!have_columns) throw InvalidArgument("csv input has no column header");
    return t;
}

inline void write_json(std::ostream& os, const Table& t) {
    nlohmann::ordered_json j;
    j["header"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : t.header) j["header"][k] = v;
    j["columns"] = t.columns;
    j["rows"] = t.rows;
    j["footer"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : t.footer) j["footer"][k] = v;
    os << j.dump(1) << '\n';
}

inline Table read_json(std::istream& is) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(is);
        Table t;
        for (const auto& [k, v] : j.at("header").items()) t.header.emplace_back(k, v.get<std::string>());
        t.columns = j.at("columns").get<std::vector<std::string>>();
        t.rows = j.at("rows").get<std::vector<std::vector<double>>>();
        for (const auto& [k, v] : j.at("footer").items()) t.footer.emplace_back(k, v.get<std::string>());
        for (const auto& row : t.rows) {
            if (row.size() != t.columns.size()) throw InvalidArgument("json row width does not match columns");
        }
        return t;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed result json: ") + e.what());
    }
}

enum class Format { csv, json };

inline Format parse_format(std::string_view s) {
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    throw InvalidArgument("unknown format '" + std::string(s) + "'");
}

inline void write_table(std::ostream& os, const Table& t, Format f) {
    f == Format::csv ? write_csv(os, t) : write_json(os, t);
}

/// Reads either format, deciding from the first non-blank character.
inline Table read_table(std::istream& is) {
    while (is && std::isspace(is.peek())) is.get();
    return is.peek() == '{' ? read_json(is) : read_csv(is);
}

// ---------------------------------------------------------------------------
// Record <-> table conversions

inline Table to_table(const ScalingFit& fit) {
    Table t;
    t.columns = {"N", "delta_phi", "log10N", "log10dphi"};
    for (std::size_t i = 0; i < fit.n_values.size(); ++i) {
        const double n = fit.n_values[i];
        t.rows.push_back({n, fit.delta_phis[i], std::log10(n), std::log10(fit.delta_phis[i])});
    }
    t.add_footer("slope", fit.slope);
    t.add_footer("intercept", fit.intercept);
    t.add_footer("r_squared", fit.r_squared);
    return t;
}

inline ScalingFit scaling_fit_from_table(const Table& t) {
    ScalingFit fit;
    for (double n : t.column("N")) fit.n_values.push_back(static_cast<unsigned>(n));
    fit.delta_phis = t.column("delta_phi");
    fit.slope = t.get_double("slope");
    fit.intercept = t.get_double("intercept");
    fit.r_squared = t.get_double("r_squared");
    return fit;
}

inline Table to_table(const MeasurementRecord& rec) {
    Table t;
    t.add_header("seed", std::to_string(rec.seed));
    t.add_header("protocol", std::string(to_string(rec.protocol)));
    t.add_header("N", std::to_string(rec.n));
    t.add_header("phi_true", rec.phi_true);
    t.add_header("batches", std::to_string(rec.batches));
    t.add_header("outcomes_per_batch", std::to_string(rec.outcomes_per_batch));
    t.add_header("empirical_std", rec.empirical_std);
    t.columns = {"batch", "phi_hat"};
    for (std::size_t b = 0; b < rec.phi_hats.size(); ++b) {
        t.rows.push_back({static_cast<double>(b), rec.phi_hats[b]});
    }
    return t;
}

inline MeasurementRecord measurement_record_from_table(const Table& t) {
    MeasurementRecord rec;
    rec.seed = parse_u64(t.get("seed"));
    rec.protocol = parse_protocol(t.get("protocol"));
    rec.n = static_cast<unsigned>(parse_u64(t.get("N")));
    rec.phi_true = t.get_double("phi_true");
    rec.batches = parse_u64(t.get("batches"));
    rec.outcomes_per_batch = parse_u64(t.get("outcomes_per_batch"));
    rec.empirical_std = t.get_double("empirical_std");
    rec.phi_hats = t.column("phi_hat");
    if (rec.phi_hats.size() != rec.batches) {
        throw InvalidArgument("measurement table has " + std::to_string(rec.phi_hats.size()) +
                              " rows but declares " + std::to_string(rec.batches) + " batches");
    }
    return rec;
}

inline Table to_table(const std::vector<SensitivityReport>& reports) {
    Table t;
    if (!reports.empty()) t.add_header("protocol", std::string(to_string(reports.front().protocol)));
    t.columns = {"N", "phi", "mean", "std_dev", "derivative", "delta_phi"};
    for (const auto& r : reports) {
        t.rows.push_back({static_cast<double>(r.n), r.phi, r.mean, r.std_dev, r.derivative, r.delta_phi});
    }
    return t;
}

inline std::vector<SensitivityReport> sensitivity_reports_from_table(const Table& t) {
    std::vector<SensitivityReport> out;
    const Protocol protocol = t.rows.empty() ? Protocol::separable : parse_protocol(t.get("protocol"));
    const auto ni = t.column_index("N"), pi = t.column_index("phi"), mi = t.column_index("mean"),
               si = t.column_index("std_dev"), di = t.column_index("derivative"),
               ei = t.column_index("delta_phi");
    for (const auto& row : t.rows) {
        out.push_back({protocol, static_cast<unsigned>(row[ni]), row[pi], row[mi], row[si], row[di], row[ei]});
    }
    return out;
}

inline Table to_table(const ExposureComparison& cmp) {
    const auto& q = cmp.quantum;
    const auto& c = cmp.classical;
    if (!(q.grid == c.grid)) throw InvalidArgument("exposure comparison patterns use different grids");
    Table t;
    t.add_header("N", std::to_string(q.n_photons));
    t.add_header("lambda_nm", q.wavelength);
    t.add_header("x_min_nm", q.grid.x_min);
    t.add_header("x_max_nm", q.grid.x_max);
    t.add_header("points", std::to_string(q.grid.points));
    t.add_header("fringe_period_nm", q.fringe_period);
    t.add_header("feature_size_nm", q.feature_size);
    t.add_header("classical_fringe_period_nm", c.fringe_period);
    t.add_header("classical_feature_size_nm", c.feature_size);
    t.columns = {"x_nm", "deposition_quantum", "deposition_classical"};
    for (std::size_t i = 0; i < q.grid.points; ++i) {
        t.rows.push_back({q.grid.x(i), q.deposition[i], c.deposition[i]});
    }
    return t;
}

inline ExposureComparison exposure_comparison_from_table(const Table& t) {
    SubstrateGrid grid{t.get_double("x_min_nm"), t.get_double("x_max_nm"),
                       static_cast<std::size_t>(parse_u64(t.get("points")))};
    ExposureComparison cmp;
    cmp.quantum.grid = grid;
    cmp.quantum.n_photons = static_cast<unsigned>(parse_u64(t.get("N")));
    cmp.quantum.wavelength = t.get_double("lambda_nm");
    cmp.quantum.deposition = t.column("deposition_quantum");
    cmp.quantum.fringe_period = t.get_double("fringe_period_nm");
    cmp.quantum.feature_size = t.get_double("feature_size_nm");
    cmp.classical.grid = grid;
    cmp.classical.n_photons = 1;
    cmp.classical.wavelength = cmp.quantum.wavelength;
    cmp.classical.deposition = t.column("deposition_classical");
    cmp.classical.fringe_period = t.get_double("classical_fringe_period_nm");
    cmp.classical.feature_size = t.get_double("classical_feature_size_nm");
    if (cmp.quantum.deposition.size() != grid.points) {
        throw InvalidArgument("exposure table row count does not match its grid");
    }
    return cmp;
}

} // namespace noonsim::io
