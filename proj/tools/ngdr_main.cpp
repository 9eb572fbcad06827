#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ngdr/cli.hpp"
#include "ngdr/errors.hpp"
#include "ngdr/report.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Residential natural-gas demand-response engine"};
    app.require_subcommand(0, 1);

    ngdr::ScenarioSpec spec;
    std::string mode = "baseline";
    std::string objective = "max";

    app.add_option("--mode", mode, "baseline | decentralized | centralized")
        ->check(CLI::IsMember({"baseline", "decentralized", "centralized"}));
    app.add_option("--houses", spec.houses_path, "fleet CSV (houses.csv schema)");
    app.add_option("--ambient", spec.ambient_path, "ambient forecast CSV");
    app.add_option("--horizon-hours", spec.horizon_hours, "optimization horizon T");
    app.add_option("--dt-state-min", spec.dt_state_min, "state step, minutes (default 1)");
    app.add_option("--dt-control-min", spec.dt_control_min, "control block, minutes (default 3)");
    app.add_option("--t-rh-hours", spec.t_rh_hours, "receding-horizon window (default 3)");
    app.add_option("--lambda", spec.lambdas, "comfort/gas trade-off weight (repeatable)");
    app.add_option("--gamma", spec.gammas, "curtailment factor (repeatable)");
    app.add_option("--objective", objective, "centralized objective: mean | max")
        ->check(CLI::IsMember({"mean", "max"}));
    app.add_option("--time-limit-s", spec.time_limit_s, "per-MILP time limit, seconds");
    app.add_option("--gap-tol", spec.gap_tol, "relative optimality gap tolerance");
    app.add_option("--node-limit", spec.node_limit, "per-MILP branch-and-bound node limit");
    app.add_option("--out-dir", spec.out_dir, "output directory (default .)");
    app.add_option("--peak-override", spec.peak_override,
                   "use this D (kg/s) instead of the baseline peak");
    app.add_option("--threads", spec.threads, "worker threads for per-house solves (0 = auto)");

    auto* gen_fleet = app.add_subcommand("generate-fleet", "write a synthetic fleet CSV");
    std::size_t gf_count = 140;
    std::uint64_t gf_seed = 42;
    std::string gf_out = "houses.csv";
    gen_fleet->add_option("--count", gf_count, "number of houses (default 140)");
    gen_fleet->add_option("--seed", gf_seed, "generator seed (default 42)");
    gen_fleet->add_option("--out", gf_out, "output path (default houses.csv)");

    auto* gen_amb = app.add_subcommand("generate-ambient", "write a synthetic forecast CSV");
    std::string ga_profile = "typical";
    double ga_horizon_hours = 24.0;
    int ga_step_min = 60;
    std::string ga_out = "ambient.csv";
    gen_amb->add_option("--profile", ga_profile, "typical | polar-vortex")
        ->check(CLI::IsMember({"typical", "polar-vortex"}));
    gen_amb->add_option("--horizon-hours", ga_horizon_hours, "span to cover (default 24)");
    gen_amb->add_option("--step-min", ga_step_min, "sample spacing, minutes (default 60)");
    gen_amb->add_option("--out", ga_out, "output path (default ambient.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : ngdr::kExitValidation;
    }

    try {
        if (gen_fleet->parsed()) {
            ngdr::save_fleet(ngdr::generate_fleet(gf_count, gf_seed), gf_out);
            std::cout << "wrote " << gf_count << " houses to " << gf_out << "\n";
            return ngdr::kExitOk;
        }
        if (gen_amb->parsed()) {
            const auto profile = ga_profile == "typical" ? ngdr::AmbientProfile::typical_day
                                                         : ngdr::AmbientProfile::polar_vortex;
            const auto horizon = static_cast<std::int64_t>(ga_horizon_hours * 3600.0);
            ngdr::save_ambient(ngdr::generate_ambient(profile, horizon, ga_step_min * 60), ga_out);
            std::cout << "wrote " << ga_profile << " forecast to " << ga_out << "\n";
            return ngdr::kExitOk;
        }
    } catch (const ngdr::IoError& e) {
        std::cerr << "error: io: " << e.what() << "\n";
        return ngdr::kExitIo;
    } catch (const ngdr::ValidationError& e) {
        std::cerr << "error: validation: " << e.what() << "\n";
        return ngdr::kExitValidation;
    }

    spec.mode = mode == "baseline"      ? ngdr::ScenarioSpec::Mode::baseline
                : mode == "decentralized" ? ngdr::ScenarioSpec::Mode::decentralized
                                          : ngdr::ScenarioSpec::Mode::centralized;
    spec.objective = objective == "mean" ? ngdr::CentralObjective::mean_deviation
                                         : ngdr::CentralObjective::max_deviation;
    return ngdr::run_scenario(spec);
}
