// Command-line front end: simulate, compare, bound-check, and classify
// slotted power profiles against a flywheel storage model.

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flywheel/exact.hpp"
#include "flywheel/io.hpp"
#include "flywheel/oracle.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;
constexpr int kExitBoundViolation = 3;

enum class Engine {
    Exact,
    ApproxFull,
    ApproxTruncated,
    Baseline,
    OdeOracle,
    PhysicalOracle,
};

const std::map<std::string, Engine> kEngineNames{
    {"exact", Engine::Exact},
    {"approx-full", Engine::ApproxFull},
    {"approx-truncated", Engine::ApproxTruncated},
    {"baseline", Engine::Baseline},
    {"ode-oracle", Engine::OdeOracle},
    {"physical-oracle", Engine::PhysicalOracle},
};

struct CommonOptions {
    std::string config_path;
    std::string profile_path;
    std::string out_path = "-";
    std::string format = "csv";
    flywheel::OracleConfig oracle;
    std::map<std::string, double> overrides;
};

void add_common_options(CLI::App& cmd, CommonOptions& opts) {
    cmd.add_option("--config", opts.config_path, "key=value parameter file")->required();
    cmd.add_option("--profile", opts.profile_path, "power profile CSV (slot,power_w)")
        ->required();
    cmd.add_option("--out", opts.out_path, "output path ('-' for stdout)");
    cmd.add_option("--format", opts.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd.add_option("--substeps", opts.oracle.substeps_per_slot,
                   "RK4 substeps per slot for the oracle engines");
    cmd.add_option("--quad-tol", opts.oracle.quad_tol,
                   "relative tolerance of the quadrature oracle");

    // Every parameter key can be overridden on the command line.
    static const std::vector<std::pair<std::string, std::string>> kParamFlags{
        {"--t-loss", "t_loss_s"},     {"--t-cont", "t_cont_s"},
        {"--e-c", "e_c"},             {"--e-d", "e_d"},
        {"--e-init", "e_init_j"},     {"--e-cap", "e_cap_j"},
        {"--p-rated", "p_rated_w"},   {"--delta", "delta_s"},
        {"--p-prev-init", "p_prev_init_w"}};
    for (const auto& [flag, key] : kParamFlags) {
        const std::string key_copy = key;
        cmd.add_option_function<double>(
            flag, [&opts, key_copy](double v) { opts.overrides[key_copy] = v; },
            "override config key " + key);
    }
}

flywheel::FlywheelParams resolve_params(const CommonOptions& opts) {
    flywheel::FlywheelParams params = flywheel::load_params(opts.config_path);
    const std::map<std::string, double*> fields{
        {"t_loss_s", &params.t_loss_s},   {"t_cont_s", &params.t_cont_s},
        {"e_c", &params.e_c},             {"e_d", &params.e_d},
        {"e_init_j", &params.e_init_j},   {"e_cap_j", &params.e_cap_j},
        {"p_rated_w", &params.p_rated_w}, {"delta_s", &params.delta_s},
        {"p_prev_init_w", &params.p_prev_init_w}};
    for (const auto& [key, value] : opts.overrides) {
        *fields.at(key) = value;
    }
    flywheel::validate_params(params);
    return params;
}

flywheel::OutputFormat resolve_format(const CommonOptions& opts) {
    return opts.format == "json" ? flywheel::OutputFormat::Json : flywheel::OutputFormat::Csv;
}

flywheel::EnergyTrace run_engine(Engine engine, const flywheel::PowerProfile& profile,
                                 const flywheel::FlywheelParams& params, flywheel::SimMode mode,
                                 const flywheel::OracleConfig& oracle) {
    switch (engine) {
    case Engine::Exact:
        return flywheel::simulate_exact(profile, params, mode);
    case Engine::ApproxFull:
        return flywheel::simulate_approx(profile, params, flywheel::ApproxMode::Full, mode);
    case Engine::ApproxTruncated:
        return flywheel::simulate_approx(profile, params, flywheel::ApproxMode::Truncated, mode);
    case Engine::Baseline:
        return flywheel::simulate_baseline(profile, params);
    case Engine::OdeOracle:
        return flywheel::integrate_ode(profile, params, oracle);
    case Engine::PhysicalOracle:
        return flywheel::integrate_physical(profile, params, oracle);
    }
    throw flywheel::ValidationError("unknown engine");
}

std::vector<double> result1_bounds(const flywheel::PowerProfile& profile,
                                   const flywheel::FlywheelParams& params,
                                   std::size_t entry_count) {
    std::vector<double> bounds;
    bounds.reserve(entry_count);
    for (std::size_t k = 0; k < entry_count; ++k) {
        bounds.push_back(
            flywheel::error_bound(k, params.delta_s, params.t_loss_s, profile, params.e_d));
    }
    return bounds;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Flywheel state-of-charge evolution simulator"};
    app.require_subcommand(1);

    CommonOptions sim_opts;
    std::string sim_engine = "exact";
    bool sim_clamp = false;
    CLI::App* sim = app.add_subcommand("simulate", "run one engine over a profile");
    add_common_options(*sim, sim_opts);
    sim->add_option("--engine", sim_engine, "engine to run")
        ->check(CLI::IsMember(
            {"exact", "approx-full", "approx-truncated", "baseline", "ode-oracle",
             "physical-oracle"}));
    sim->add_flag("--clamp", sim_clamp, "clamp stored energy to [0, e_cap] after each slot");

    CommonOptions cmp_opts;
    std::string cmp_engine = "approx-truncated";
    CLI::App* cmp = app.add_subcommand("compare", "run an engine against the exact reference");
    add_common_options(*cmp, cmp_opts);
    cmp->add_option("--engine", cmp_engine, "engine to compare against exact")
        ->check(CLI::IsMember(
            {"exact", "approx-full", "approx-truncated", "baseline", "ode-oracle",
             "physical-oracle"}));

    CommonOptions bnd_opts;
    std::string bnd_engine = "approx-truncated";
    bool bnd_check = false;
    std::string bnd_trace_path;
    CLI::App* bnd = app.add_subcommand("bound", "check the approximation gap bound");
    add_common_options(*bnd, bnd_opts);
    bnd->add_option("--engine", bnd_engine, "approximate engine to check")
        ->check(CLI::IsMember({"approx-full", "approx-truncated"}));
    bnd->add_flag("--check", bnd_check, "exit with status 3 if any slot violates the bound");
    bnd->add_option("--approx-trace", bnd_trace_path,
                    "check an externally produced trace CSV instead of simulating");

    CommonOptions cls_opts;
    CLI::App* cls = app.add_subcommand("classify", "per-slot transition classification");
    add_common_options(*cls, cls_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (sim->parsed()) {
            const auto params = resolve_params(sim_opts);
            const auto profile =
                flywheel::load_profile(sim_opts.profile_path, params.delta_s);
            flywheel::validate_profile(profile, params);
            const Engine engine = kEngineNames.at(sim_engine);
            if (sim_clamp && engine != Engine::Exact && engine != Engine::ApproxFull &&
                engine != Engine::ApproxTruncated) {
                throw flywheel::ValidationError(
                    "--clamp is only supported by the exact and approx engines");
            }
            const auto mode =
                sim_clamp ? flywheel::SimMode::Clamp : flywheel::SimMode::Unconstrained;
            const auto trace = run_engine(engine, profile, params, mode, sim_opts.oracle);
            flywheel::write_output(sim_opts.out_path,
                                   flywheel::format_trace(trace, resolve_format(sim_opts)));
        } else if (cmp->parsed()) {
            const auto params = resolve_params(cmp_opts);
            const auto profile =
                flywheel::load_profile(cmp_opts.profile_path, params.delta_s);
            flywheel::validate_profile(profile, params);
            const auto exact =
                flywheel::simulate_exact(profile, params, flywheel::SimMode::Unconstrained);
            const auto engine_trace =
                run_engine(kEngineNames.at(cmp_engine), profile, params,
                           flywheel::SimMode::Unconstrained, cmp_opts.oracle);
            const auto bounds = result1_bounds(profile, params, exact.entries.size());
            flywheel::write_output(
                cmp_opts.out_path,
                flywheel::format_compare(engine_trace, exact, bounds, resolve_format(cmp_opts)));
        } else if (bnd->parsed()) {
            const auto params = resolve_params(bnd_opts);
            const auto profile =
                flywheel::load_profile(bnd_opts.profile_path, params.delta_s);
            flywheel::validate_profile(profile, params);
            const auto mode = bnd_engine == "approx-full" ? flywheel::ApproxMode::Full
                                                          : flywheel::ApproxMode::Truncated;
            flywheel::BoundReport report;
            if (bnd_trace_path.empty()) {
                report = flywheel::check_bound(profile, params, mode);
            } else {
                // External trace: gaps against an internally simulated exact
                // trace, bound and slack exactly as in check_bound.
                const auto loaded = flywheel::read_trace_csv(bnd_trace_path);
                const auto exact =
                    flywheel::simulate_exact(profile, params, flywheel::SimMode::Unconstrained);
                if (loaded.entries.size() != exact.entries.size()) {
                    throw flywheel::ValidationError(
                        "--approx-trace row count does not match the profile");
                }
                for (std::size_t k = 0; k < exact.entries.size(); ++k) {
                    const double gap = std::abs(exact.entries[k].e_j - loaded.entries[k].e_j);
                    const double bound = flywheel::error_bound(k, params.delta_s,
                                                               params.t_loss_s, profile,
                                                               params.e_d);
                    report.entries.push_back({static_cast<int>(k), gap, bound,
                                              gap <= bound + 1e-9});
                }
                double p_max = 0.0;
                for (const double p : profile.powers_w) {
                    p_max = std::max(p_max, std::abs(p));
                }
                report.r_max_w = params.e_d * p_max;
                report.asymptotic_bound_j = report.r_max_w * params.delta_s;
            }
            flywheel::write_output(
                bnd_opts.out_path,
                flywheel::format_bound_report(report, resolve_format(bnd_opts)));
            if (bnd_check && !report.all_satisfied()) {
                return kExitBoundViolation;
            }
        } else if (cls->parsed()) {
            const auto params = resolve_params(cls_opts);
            const auto profile =
                flywheel::load_profile(cls_opts.profile_path, params.delta_s);
            flywheel::validate_profile(profile, params);
            flywheel::write_output(
                cls_opts.out_path,
                flywheel::format_classify(profile, params, resolve_format(cls_opts)));
        }
    } catch (const flywheel::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    return run_cli(argc, argv);
}
