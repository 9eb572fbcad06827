#include "ngdr/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>

#include "ngdr/errors.hpp"
#include "ngdr/report.hpp"
#include "ngdr/rh.hpp"
#include "ngdr/units.hpp"

namespace ngdr {

namespace {

constexpr std::size_t kProjectionTarget = 10000; // aggregation benefit scale

std::int64_t minutes_i(int m) { return static_cast<std::int64_t>(m) * 60; }

double now_seconds(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string scenario_name(ScenarioSpec::Mode mode, CentralObjective obj, double value) {
    if (mode == ScenarioSpec::Mode::decentralized) return "dec_l" + format_double(value);
    return std::string("cen_") + (obj == CentralObjective::mean_deviation ? "mean" : "max") + "_g" +
           format_double(value);
}

RunReport make_report(const std::string& scenario, const std::vector<double>& deltas_k,
                      double total_gas, std::size_t houses, double time_s, double avg_gap) {
    RunReport r;
    r.scenario = scenario;
    r.deviation = deviation_stats(deltas_k);
    r.total_gas = total_gas;
    r.gas_per_house = total_gas / static_cast<double>(houses);
    r.time_s = time_s;
    r.avg_gap_pct = avg_gap * 100.0;
    return r;
}

} // namespace

void ScenarioSpec::validate() const {
    if (houses_path.empty()) throw ValidationError("spec: --houses is required");
    if (ambient_path.empty()) throw ValidationError("spec: --ambient is required");
    if (mode == Mode::decentralized && lambdas.empty())
        throw ValidationError("spec: decentralized mode needs at least one --lambda");
    if (mode == Mode::centralized && gammas.empty())
        throw ValidationError("spec: centralized mode needs at least one --gamma");
    for (double l : lambdas)
        if (!(l >= 0.0 && l <= 1.0))
            throw ValidationError("spec: --lambda " + format_double(l) + " outside [0,1]");
    for (double g : gammas)
        if (!(g > 0.0 && g <= 1.0))
            throw ValidationError("spec: --gamma " + format_double(g) + " outside (0,1]");
    if (!(gap_tol >= 0.0)) throw ValidationError("spec: --gap-tol must be non-negative");
    if (!(time_limit_s > 0.0)) throw ValidationError("spec: --time-limit-s must be positive");
    if (node_limit <= 0) throw ValidationError("spec: --node-limit must be positive");
    if (peak_override < 0.0) throw ValidationError("spec: --peak-override must be non-negative");
    (void)make_grid();
    const auto t_rh_s = static_cast<std::int64_t>(std::llround(t_rh_hours * 3600.0));
    if (t_rh_s <= 0 || t_rh_s % minutes_i(dt_control_min) != 0)
        throw ValidationError("spec: --t-rh-hours must be a positive multiple of the control step");
}

Grid ScenarioSpec::make_grid() const {
    if (dt_state_min <= 0 || dt_control_min <= 0)
        throw ValidationError("spec: time steps must be positive");
    const auto horizon_s = static_cast<std::int64_t>(std::llround(horizon_hours * 3600.0));
    return Grid(minutes_i(dt_state_min), minutes_i(dt_control_min), horizon_s);
}

int run_scenario(const ScenarioSpec& spec) {
    try {
        spec.validate();
        const Grid grid = spec.make_grid();
        const auto t_rh_s = static_cast<std::int64_t>(std::llround(spec.t_rh_hours * 3600.0));

        const std::vector<HouseParams> fleet = load_fleet(spec.houses_path);
        const AmbientSeries ambient = load_ambient(spec.ambient_path);
        if (!ambient.covers(static_cast<double>(grid.horizon)))
            throw ValidationError("spec: ambient file covers " +
                                  format_double(ambient.span() / 3600.0) + " h but the horizon is " +
                                  format_double(static_cast<double>(grid.horizon) / 3600.0) + " h");

        const PhysicalConstants constants;
        std::vector<ThermalCoefficients> coeffs;
        coeffs.reserve(fleet.size());
        for (const auto& h : fleet) coeffs.push_back(compute_thermal_coefficients(constants, h));

        std::filesystem::create_directories(spec.out_dir);
        const auto out = [&](const std::string& name) { return spec.out_dir + "/" + name; };

        SolveOptions opts;
        opts.gap_tol = spec.gap_tol;
        opts.time_limit_s = spec.time_limit_s;
        opts.node_limit = spec.node_limit;

        // Baseline pass: comparison reference in every mode, and the peak D.
        const auto t0 = std::chrono::steady_clock::now();
        const auto baseline_runs = simulate_baseline(fleet, constants, ambient, grid);
        std::vector<ControlSchedule> baseline_schedules;
        std::vector<double> baseline_deltas;
        double baseline_gas = 0.0;
        for (std::size_t h = 0; h < fleet.size(); ++h) {
            baseline_schedules.push_back(baseline_runs[h].schedule);
            baseline_deltas.push_back(
                compute_deviation(baseline_runs[h].trajectory, fleet[h].setpoint));
            baseline_gas += compute_gas(baseline_runs[h].schedule, fleet[h].burn_rate, grid);
        }
        const AggregateDemand baseline_demand = aggregate_demand(fleet, baseline_schedules, grid);
        const double baseline_peak = peak_demand(baseline_demand);
        const double baseline_time = now_seconds(t0);

        std::vector<RunReport> reports;
        std::vector<SavingsRow> savings;
        std::vector<BoxplotScenario> boxplots;

        reports.push_back(make_report("baseline", baseline_deltas, baseline_gas, fleet.size(),
                                      baseline_time, 0.0));
        BoxplotScenario base_box;
        base_box.scenario = "baseline";
        for (std::size_t h = 0; h < fleet.size(); ++h)
            base_box.delta_k_by_house.emplace_back(fleet[h].id, baseline_deltas[h]);
        boxplots.push_back(std::move(base_box));

        if (spec.mode == ScenarioSpec::Mode::baseline) {
            emit_demand_series(baseline_demand, grid, out("demand.csv"));
            emit_run_report(reports, out("report.csv"));
            std::cout << "baseline: peak " << format_double(baseline_peak) << " kg/s, gas "
                      << format_double(baseline_gas) << " kg\n";
            return kExitOk;
        }

        if (spec.mode == ScenarioSpec::Mode::decentralized) {
            for (double lambda : spec.lambdas) {
                const std::string name =
                    scenario_name(spec.mode, spec.objective, lambda);
                Type1Config cfg;
                cfg.lambda = lambda;
                const auto ts = std::chrono::steady_clock::now();
                const RhOutcome rh = run_receding_horizon(fleet, coeffs, ambient, cfg, grid,
                                                          t_rh_s, opts, spec.threads);
                const double secs = now_seconds(ts);

                std::vector<double> deltas;
                std::vector<ControlSchedule> schedules;
                double gas = 0.0;
                BoxplotScenario box;
                box.scenario = name;
                for (const auto& ho : rh.outcome.houses) {
                    deltas.push_back(ho.delta);
                    schedules.push_back(ho.schedule);
                    gas += ho.gas;
                    box.delta_k_by_house.emplace_back(ho.house_id, ho.delta);
                }
                reports.push_back(make_report(name, deltas, gas, fleet.size(), secs, rh.avg_gap));
                savings.push_back({name, baseline_gas, gas,
                                   (baseline_gas - gas) / static_cast<double>(fleet.size()),
                                   savings_projection(baseline_gas, gas, fleet.size(),
                                                      kProjectionTarget)});
                boxplots.push_back(std::move(box));
                emit_demand_series(aggregate_demand(fleet, schedules, grid), grid,
                                   out("demand_" + name + ".csv"));
                std::cout << name << ": gas " << format_double(gas) << " kg, mean dev "
                          << format_double(reports.back().deviation.mean) << " F, avg gap "
                          << format_double(rh.avg_gap * 100.0) << "%\n";
            }
        } else {
            const double peak = spec.peak_override > 0.0 ? spec.peak_override : baseline_peak;
            for (double gamma : spec.gammas) {
                const std::string name = scenario_name(spec.mode, spec.objective, gamma);
                Type2Config cfg;
                cfg.gamma = gamma;
                cfg.peak = peak;
                cfg.objective = spec.objective;
                const auto ts = std::chrono::steady_clock::now();
                const RhOutcome rh =
                    run_receding_horizon(fleet, coeffs, ambient, cfg, grid, t_rh_s, opts);
                const double secs = now_seconds(ts);

                std::vector<double> deltas;
                std::vector<ControlSchedule> schedules;
                double gas = 0.0;
                BoxplotScenario box;
                box.scenario = name;
                for (const auto& ho : rh.outcome.houses) {
                    deltas.push_back(ho.delta);
                    schedules.push_back(ho.schedule);
                    gas += ho.gas;
                    box.delta_k_by_house.emplace_back(ho.house_id, ho.delta);
                }

                // Final guard: no emitted schedule may break the peak cap.
                const AggregateDemand dr_demand = aggregate_demand(fleet, schedules, grid);
                for (std::size_t k = 0; k < dr_demand.samples.size(); ++k)
                    if (dr_demand.samples[k] > gamma * peak + 1e-9)
                        throw ConsistencyError(
                            name + ": aggregate demand " + format_double(dr_demand.samples[k]) +
                            " kg/s exceeds the cap " + format_double(gamma * peak) +
                            " kg/s at state step " + std::to_string(k));

                reports.push_back(make_report(name, deltas, gas, fleet.size(), secs, rh.avg_gap));
                savings.push_back({name, baseline_gas, gas,
                                   (baseline_gas - gas) / static_cast<double>(fleet.size()),
                                   savings_projection(baseline_gas, gas, fleet.size(),
                                                      kProjectionTarget)});
                boxplots.push_back(std::move(box));
                emit_demand_series(dr_demand, grid, out("demand_" + name + ".csv"));
                std::cout << name << ": gas " << format_double(gas) << " kg, max dev "
                          << format_double(reports.back().deviation.max) << " F, avg gap "
                          << format_double(rh.avg_gap * 100.0) << "%\n";
            }
        }

        emit_demand_series(baseline_demand, grid, out("demand.csv"));
        emit_run_report(reports, out("report.csv"));
        emit_savings(savings, out("savings.csv"));
        emit_boxplot_data(boxplots, out("boxplot.csv"));
        return kExitOk;
    } catch (const IoError& e) {
        std::cerr << "error: io: " << e.what() << "\n";
        return kExitIo;
    } catch (const ValidationError& e) {
        std::cerr << "error: validation: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ConsistencyError& e) {
        std::cerr << "error: consistency: " << e.what() << "\n";
        return kExitInternal;
    } catch (const SolverError& e) {
        std::cerr << "error: solver: " << e.what() << "\n";
        return kExitInternal;
    }
}

} // namespace ngdr
