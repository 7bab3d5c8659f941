// noonsim: command-line runner for the phase-estimation experiments.
//
// Exit status: 0 success, 2 usage error, 3 numerical-contract violation.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "noonsim/noonsim.hpp"

namespace {

using namespace noonsim;
using nlohmann::json;

constexpr int kExitUsage = 2;
constexpr int kExitContract = 3;

struct CommonOptions {
    std::string out = "-";
    std::string format = "csv";
    std::string config;
};

std::string json_to_flag_value(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_array()) {
        std::string s;
        for (const auto& e : v) s += (s.empty() ? "" : ",") + json_to_flag_value(e);
        return s;
    }
    if (v.is_number_float()) return io::format_double(v.get<double>());
    if (v.is_number()) return v.dump();
    throw InvalidArgument("unsupported config value " + v.dump());
}

/// Fills options of `sub` that were not given on the command line from the
/// JSON config file. Unknown keys are rejected.
void apply_config(CLI::App& sub, const std::string& path, std::string& format, std::string& out) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open config file '" + path + "'");
    json cfg;
    try {
        cfg = json::parse(in);
    } catch (const json::exception& e) {
        throw InvalidArgument("config file '" + path + "' is not valid JSON: " + e.what());
    }
    if (!cfg.is_object()) throw InvalidArgument("config file must hold a JSON object");

    static const std::set<std::string> top_keys{"command", "params", "seed", "out_path", "format"};
    for (const auto& [key, value] : cfg.items()) {
        if (!top_keys.contains(key)) throw InvalidArgument("unknown config key '" + key + "'");
    }
    if (cfg.contains("command") && cfg["command"].get<std::string>() != sub.get_name()) {
        throw InvalidArgument("config command '" + cfg["command"].get<std::string>() +
                              "' does not match subcommand '" + sub.get_name() + "'");
    }

    auto fill = [&](const std::string& name, const json& value) {
        std::string flag = name;
        std::replace(flag.begin(), flag.end(), '_', '-');
        CLI::Option* opt = sub.get_option_no_throw("--" + flag);
        if (opt == nullptr || flag == "config" || flag == "out" || flag == "format") {
            throw InvalidArgument("unknown config key '" + name + "' for command '" + sub.get_name() + "'");
        }
        if (opt->count() > 0) return;  // command line wins
        opt->add_result(json_to_flag_value(value));
        opt->run_callback();
    };

    if (cfg.contains("params")) {
        if (!cfg["params"].is_object()) throw InvalidArgument("config 'params' must be an object");
        for (const auto& [key, value] : cfg["params"].items()) fill(key, value);
    }
    if (cfg.contains("seed")) {
        if (sub.get_option_no_throw("--seed") == nullptr) {
            throw InvalidArgument("command '" + sub.get_name() + "' takes no seed");
        }
        fill("seed", cfg["seed"]);
    }
    if (cfg.contains("format") && sub.get_option("--format")->count() == 0) format = cfg["format"].get<std::string>();
    if (cfg.contains("out_path") && sub.get_option("--out")->count() == 0) out = cfg["out_path"].get<std::string>();
}

std::uint64_t resolve_seed(const CLI::Option* seed_opt, std::uint64_t flag_value) {
    if (seed_opt->count() > 0) return flag_value;
    if (const char* env = std::getenv("NOON_SEED"); env != nullptr && *env != '\0') {
        try {
            return io::parse_u64(env);
        } catch (const InvalidArgument&) {
            throw InvalidArgument(std::string("NOON_SEED='") + env + "' is not an unsigned integer");
        }
    }
    return flag_value;
}

std::string join(const std::vector<unsigned>& ns) {
    std::string s;
    for (unsigned n : ns) s += (s.empty() ? "" : ",") + std::to_string(n);
    return s;
}

void emit(const io::Table& body, const io::Metadata& config, const CommonOptions& common) {
    io::Table t = body;
    io::Metadata header = config;
    header.insert(header.end(), t.header.begin(), t.header.end());
    t.header = std::move(header);
    const io::Format format = io::parse_format(common.format);
    if (common.out == "-") {
        io::write_table(std::cout, t, format);
        return;
    }
    std::ofstream os(common.out, std::ios::binary | std::ios::trunc);
    if (!os) throw InvalidArgument("cannot write output file '" + common.out + "'");
    io::write_table(os, t, format);
}

void add_common(CLI::App& sub, CommonOptions& common) {
    sub.add_option("--out", common.out, "Output file, '-' for stdout");
    sub.add_option("--format", common.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub.add_option("--config", common.config, "JSON config file; flags override its values");
}

io::Metadata config_header(const std::string& command, const CommonOptions& common) {
    return {{"config.command", command}, {"config.format", common.format}, {"config.out_path", common.out}};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Phase-estimation experiments with separable and NOON probes"};
    app.require_subcommand(1);
    CommonOptions common;

    // sensitivity
    auto* sens = app.add_subcommand("sensitivity", "Error-propagation phase sensitivity");
    std::string sens_protocol = "noon", sens_n = "1", sens_mode = "closed_form";
    double sens_phi = 1.0;
    sens->add_option("--protocol", sens_protocol)->check(CLI::IsMember({"separable", "noon"}));
    sens->add_option("--n", sens_n, "Comma-separated, strictly increasing N values");
    sens->add_option("--phi", sens_phi, "Phase in radians");
    sens->add_option("--mode", sens_mode)->check(CLI::IsMember({"closed_form", "numeric_derivative"}));
    add_common(*sens, common);

    // scaling
    auto* scal = app.add_subcommand("scaling", "Log-log fit of delta_phi against N");
    std::string scal_protocol = "noon", scal_n = "1,2,4,8,16,32,64,128,256,512,1024", scal_mode = "closed_form";
    double scal_phi = 1.0;
    std::size_t scal_batches = 2000, scal_shots = 1000;
    std::uint64_t scal_seed = 0;
    unsigned scal_threads = 0;
    scal->add_option("--protocol", scal_protocol)->check(CLI::IsMember({"separable", "noon"}));
    scal->add_option("--n", scal_n, "Comma-separated, strictly increasing N values");
    scal->add_option("--mode", scal_mode)->check(CLI::IsMember({"closed_form", "numeric_derivative", "montecarlo"}));
    scal->add_option("--phi", scal_phi, "Phase for the analytic modes");
    scal->add_option("--batches", scal_batches, "Monte Carlo batches per N");
    scal->add_option("--shots", scal_shots, "Monte Carlo outcomes per batch");
    auto* scal_seed_opt = scal->add_option("--seed", scal_seed, "Monte Carlo seed (default: $NOON_SEED or 0)");
    scal->add_option("--threads", scal_threads, "Worker threads, 0 = hardware concurrency");
    add_common(*scal, common);

    // montecarlo
    auto* mc = app.add_subcommand("montecarlo", "Seeded measurement record for one N");
    std::string mc_protocol = "noon";
    unsigned mc_n = 10;
    double mc_phi = 0.0;
    std::size_t mc_batches = 2000, mc_shots = 1000;
    std::uint64_t mc_seed = 0;
    unsigned mc_threads = 0;
    mc->add_option("--protocol", mc_protocol)->check(CLI::IsMember({"separable", "noon"}));
    mc->add_option("--n", mc_n)->check(CLI::PositiveNumber);
    auto* mc_phi_opt = mc->add_option("--phi", mc_phi, "True phase (default: steepest fringe point)");
    mc->add_option("--batches", mc_batches);
    mc->add_option("--shots", mc_shots, "Outcomes per batch");
    auto* mc_seed_opt = mc->add_option("--seed", mc_seed, "Seed (default: $NOON_SEED or 0)");
    mc->add_option("--threads", mc_threads);
    add_common(*mc, common);

    // rosetta
    auto* ros = app.add_subcommand("rosetta", "Mach-Zehnder / Ramsey / Hadamard equivalence sweep");
    std::size_t ros_points = 64;
    std::string ros_convention = "bs_i_convention";
    bool ros_conjugation = false;
    ros->add_option("--points", ros_points, "Phase grid points over [0, 2pi)");
    ros->add_option("--convention", ros_convention, "Mach-Zehnder beam-splitter convention")
        ->check(CLI::IsMember({"bs_i_convention", "bs_symmetric"}));
    ros->add_flag("--verify-eq8", ros_conjugation, "Also check (H..H) A'_N (H..H) = A_N for N = 1..8");
    add_common(*ros, common);

    // litho
    auto* lit = app.add_subcommand("litho", "N-photon exposure pattern against the classical one");
    unsigned lit_n = 2;
    double lit_lambda = 400.0, lit_span = 1000.0;
    std::size_t lit_points = 4096;
    std::string lit_svg;
    lit->add_option("--n", lit_n)->check(CLI::PositiveNumber);
    lit->add_option("--lambda", lit_lambda, "Wavelength in nm");
    lit->add_option("--span", lit_span, "Substrate span in nm, starting at x = 0");
    lit->add_option("--points", lit_points, "Grid points");
    lit->add_option("--svg", lit_svg, "Also write an SVG line plot here");
    add_common(*lit, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        if (!common.config.empty()) apply_config(*sub, common.config, common.format, common.out);
        io::parse_format(common.format);
        io::Metadata cfg = config_header(sub->get_name(), common);

        if (sub == sens) {
            experiments::SensitivityParams p{parse_protocol(sens_protocol), experiments::parse_n_list(sens_n),
                                             sens_phi, parse_derivative_mode(sens_mode)};
            cfg.insert(cfg.end(), {{"config.protocol", sens_protocol},
                                   {"config.n", join(p.n_values)},
                                   {"config.phi", io::format_double(sens_phi)},
                                   {"config.mode", sens_mode}});
            emit(experiments::run_sensitivity(p), cfg, common);
        } else if (sub == scal) {
            experiments::ScalingParams p;
            p.protocol = parse_protocol(scal_protocol);
            p.n_values = experiments::parse_n_list(scal_n);
            p.mode = experiments::parse_scaling_mode(scal_mode);
            p.phi = scal_phi;
            p.batches = scal_batches;
            p.shots = scal_shots;
            p.seed = resolve_seed(scal_seed_opt, scal_seed);
            p.workers = scal_threads;
            cfg.insert(cfg.end(), {{"config.protocol", scal_protocol},
                                   {"config.n", join(p.n_values)},
                                   {"config.mode", scal_mode},
                                   {"config.phi", io::format_double(scal_phi)},
                                   {"config.batches", std::to_string(p.batches)},
                                   {"config.shots", std::to_string(p.shots)},
                                   {"config.seed", std::to_string(p.seed)}});
            emit(experiments::run_scaling(p).table, cfg, common);
        } else if (sub == mc) {
            experiments::MonteCarloParams p;
            p.protocol = parse_protocol(mc_protocol);
            p.n = mc_n;
            if (mc_phi_opt->count() > 0) p.phi = mc_phi;
            p.batches = mc_batches;
            p.shots = mc_shots;
            p.seed = resolve_seed(mc_seed_opt, mc_seed);
            p.workers = mc_threads;
            const auto rec = experiments::run_montecarlo(p);
            cfg.insert(cfg.end(), {{"config.protocol", mc_protocol},
                                   {"config.n", std::to_string(p.n)},
                                   {"config.phi", io::format_double(rec.phi_true)},
                                   {"config.batches", std::to_string(p.batches)},
                                   {"config.shots", std::to_string(p.shots)},
                                   {"config.seed", std::to_string(p.seed)}});
            emit(io::to_table(rec), cfg, common);
        } else if (sub == ros) {
            const auto run = experiments::run_rosetta(ros_points, parse_convention(ros_convention), ros_conjugation ? 8 : 0);
            cfg.insert(cfg.end(), {{"config.points", std::to_string(ros_points)},
                                   {"config.convention", ros_convention},
                                   {"config.verify_eq8", ros_conjugation ? "true" : "false"}});
            emit(run.table, cfg, common);
            if (!run.within_contract) {
                std::cerr << "rosetta: deviation above contract (max_dev " << run.table.get("max_dev") << ")\n";
                return kExitContract;
            }
        } else if (sub == lit) {
            const experiments::LithoParams p{lit_n, lit_lambda, lit_span, lit_points};
            const auto run = experiments::run_litho(p);
            cfg.insert(cfg.end(), {{"config.n", std::to_string(lit_n)},
                                   {"config.lambda", io::format_double(lit_lambda)},
                                   {"config.span", io::format_double(lit_span)},
                                   {"config.points", std::to_string(lit_points)}});
            emit(run.table, cfg, common);
            if (!lit_svg.empty()) {
                std::ofstream svg(lit_svg, std::ios::binary | std::ios::trunc);
                if (!svg) throw InvalidArgument("cannot write svg file '" + lit_svg + "'");
                svg << experiments::render_svg(run.patterns);
            }
        }
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ContractViolation& e) {
        std::cerr << "contract violation: " << e.what() << '\n';
        return kExitContract;
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
