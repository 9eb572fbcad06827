#include "ngdr/rh.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "ngdr/errors.hpp"

namespace ngdr {

RhPlan plan_windows(std::int64_t horizon, std::int64_t t_rh, const Grid& grid) {
    if (t_rh <= 0 || t_rh % grid.dt_control != 0)
        throw ConfigError("rh: t_rh must be a positive multiple of dt_control");
    if (horizon <= 0 || horizon % grid.dt_control != 0)
        throw ConfigError("rh: horizon must be a positive multiple of dt_control");
    RhPlan plan;
    plan.t_rh = t_rh;
    for (std::int64_t start = 0; start < horizon; start += t_rh) {
        const std::int64_t end = std::min(start + t_rh, horizon);
        plan.windows.emplace_back(start, end);
    }
    return plan;
}

namespace {

// Verifies that the stitched full-horizon trajectory reproduces the
// chained window trajectories exactly (identical arithmetic by design).
// Window w's first sample overlaps window (w-1)'s last.
void check_stitch(const Trajectory& full, const std::vector<Trajectory>& windows) {
    std::size_t base = 0;
    for (const auto& w : windows) {
        for (std::size_t j = 0; j < w.samples.size(); ++j) {
            if (full.samples[base + j] != w.samples[j])
                throw ConsistencyError(
                    "rh: stitched trajectory diverges from the window solve at state step " +
                    std::to_string(base + j));
        }
        base += w.samples.size() - 1;
    }
}

struct WindowAccumulator {
    std::vector<std::uint8_t> schedule;
    std::vector<Trajectory> window_trajectories;
    std::vector<WindowStat> stats;
};

} // namespace

RhOutcome run_receding_horizon(const std::vector<HouseParams>& fleet,
                               const std::vector<ThermalCoefficients>& coeffs,
                               const AmbientSeries& ambient, const Type1Config& cfg,
                               const Grid& full_grid, std::int64_t t_rh, const SolveOptions& opts,
                               int threads) {
    cfg.validate();
    if (fleet.size() != coeffs.size()) throw ShapeError("rh: fleet and coefficient counts differ");
    const RhPlan plan = plan_windows(full_grid.horizon, t_rh, full_grid);

    std::vector<WindowAccumulator> acc(fleet.size());
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(fleet.size());

    auto run_house = [&](std::size_t h) {
        double theta0 = fleet[h].theta0;
        for (std::size_t w = 0; w < plan.windows.size(); ++w) {
            const auto [start, end] = plan.windows[w];
            const Grid wgrid(full_grid.dt_state, full_grid.dt_control, end - start);
            HouseParams house = fleet[h];
            house.theta0 = theta0;
            const DecentralizedModel model = build_decentralized(
                house, coeffs[h], ambient, cfg, wgrid, static_cast<double>(start));
            const MilpSolution sol = solve_milp(model.milp, opts);
            if (sol.status == SolveStatus::infeasible || sol.status == SolveStatus::unbounded)
                throw SolverError("rh: window " + std::to_string(w) + " for house " +
                                  fleet[h].id + " reported " + to_string(sol.status) +
                                  "; the deviation slack should make every window feasible");
            const SolveOutcome out = extract_outcome(model, sol, house, coeffs[h], ambient, cfg,
                                                     wgrid, static_cast<double>(start));
            const auto& ho = out.houses[0];
            acc[h].schedule.insert(acc[h].schedule.end(), ho.schedule.values.begin(),
                                   ho.schedule.values.end());
            acc[h].window_trajectories.push_back(ho.trajectory);
            acc[h].stats.push_back({static_cast<int>(w), sol.status, sol.objective_value,
                                    sol.best_bound, sol.gap, sol.nodes, sol.solve_seconds});
            theta0 = ho.trajectory.back();
        }
    };

    int nthreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    nthreads = std::max(1, std::min<int>(nthreads, static_cast<int>(fleet.size())));
    if (nthreads == 1) {
        for (std::size_t h = 0; h < fleet.size(); ++h) run_house(h);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int t = 0; t < nthreads; ++t) {
            pool.emplace_back([&]() {
                for (;;) {
                    const std::size_t h = next.fetch_add(1);
                    if (h >= fleet.size()) return;
                    try {
                        run_house(h);
                    } catch (...) {
                        errors[h] = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    RhOutcome rh;
    double obj = 0.0;
    for (std::size_t h = 0; h < fleet.size(); ++h) {
        HouseOutcome ho;
        ho.house_id = fleet[h].id;
        ho.schedule = ControlSchedule(acc[h].schedule);
        ho.trajectory = simulate_trajectory(fleet[h], coeffs[h], ambient, ho.schedule, full_grid);
        check_stitch(ho.trajectory, acc[h].window_trajectories);
        ho.delta = compute_deviation(ho.trajectory, fleet[h].setpoint);
        ho.gas = compute_gas(ho.schedule, fleet[h].burn_rate, full_grid);
        obj += cfg.lambda * ho.delta + (1.0 - cfg.lambda) * ho.gas;
        rh.outcome.houses.push_back(std::move(ho));
        for (const auto& s : acc[h].stats) rh.window_stats.push_back(s);
    }
    rh.outcome.objective = obj;

    SolveStatus status = SolveStatus::optimal;
    double gap_sum = 0.0;
    double secs = 0.0;
    for (const auto& s : rh.window_stats) {
        if (s.status == SolveStatus::feasible_time_limit) status = SolveStatus::feasible_time_limit;
        gap_sum += s.gap;
        secs += s.seconds;
    }
    rh.outcome.status = status;
    rh.avg_gap = rh.window_stats.empty() ? 0.0 : gap_sum / static_cast<double>(rh.window_stats.size());
    rh.outcome.gap = rh.avg_gap;
    rh.solve_seconds = secs;
    return rh;
}

RhOutcome run_receding_horizon(const std::vector<HouseParams>& fleet,
                               const std::vector<ThermalCoefficients>& coeffs,
                               const AmbientSeries& ambient, const Type2Config& cfg,
                               const Grid& full_grid, std::int64_t t_rh, const SolveOptions& opts) {
    cfg.validate();
    if (fleet.empty()) throw ValidationError("rh: centralized run needs a non-empty fleet");
    if (fleet.size() != coeffs.size()) throw ShapeError("rh: fleet and coefficient counts differ");
    const RhPlan plan = plan_windows(full_grid.horizon, t_rh, full_grid);

    std::vector<std::vector<std::uint8_t>> schedules(fleet.size());
    std::vector<std::vector<Trajectory>> window_trajs(fleet.size());
    std::vector<double> theta0(fleet.size());
    for (std::size_t h = 0; h < fleet.size(); ++h) theta0[h] = fleet[h].theta0;

    RhOutcome rh;
    for (std::size_t w = 0; w < plan.windows.size(); ++w) {
        const auto [start, end] = plan.windows[w];
        const Grid wgrid(full_grid.dt_state, full_grid.dt_control, end - start);
        std::vector<HouseParams> whouses = fleet;
        for (std::size_t h = 0; h < fleet.size(); ++h) whouses[h].theta0 = theta0[h];
        const CentralizedModel model =
            build_centralized(whouses, coeffs, ambient, cfg, wgrid, static_cast<double>(start));
        const MilpSolution sol = solve_milp(model.milp, opts);
        if (sol.status == SolveStatus::infeasible || sol.status == SolveStatus::unbounded)
            throw SolverError("rh: centralized window " + std::to_string(w) + " reported " +
                              to_string(sol.status) +
                              "; the deviation slack should make every window feasible");
        const SolveOutcome out = extract_outcome(model, sol, whouses, coeffs, ambient, cfg, wgrid,
                                                 static_cast<double>(start));
        for (std::size_t h = 0; h < fleet.size(); ++h) {
            schedules[h].insert(schedules[h].end(), out.houses[h].schedule.values.begin(),
                                out.houses[h].schedule.values.end());
            window_trajs[h].push_back(out.houses[h].trajectory);
            theta0[h] = out.houses[h].trajectory.back();
        }
        rh.window_stats.push_back({static_cast<int>(w), sol.status, sol.objective_value,
                                   sol.best_bound, sol.gap, sol.nodes, sol.solve_seconds});
    }

    for (std::size_t h = 0; h < fleet.size(); ++h) {
        HouseOutcome ho;
        ho.house_id = fleet[h].id;
        ho.schedule = ControlSchedule(schedules[h]);
        ho.trajectory = simulate_trajectory(fleet[h], coeffs[h], ambient, ho.schedule, full_grid);
        check_stitch(ho.trajectory, window_trajs[h]);
        ho.delta = compute_deviation(ho.trajectory, fleet[h].setpoint);
        ho.gas = compute_gas(ho.schedule, fleet[h].burn_rate, full_grid);
        rh.outcome.houses.push_back(std::move(ho));
    }
    rh.outcome.objective = central_objective(rh.outcome.houses, cfg.objective);

    SolveStatus status = SolveStatus::optimal;
    double gap_sum = 0.0, secs = 0.0;
    for (const auto& s : rh.window_stats) {
        if (s.status == SolveStatus::feasible_time_limit) status = SolveStatus::feasible_time_limit;
        gap_sum += s.gap;
        secs += s.seconds;
    }
    rh.outcome.status = status;
    rh.avg_gap = rh.window_stats.empty() ? 0.0 : gap_sum / static_cast<double>(rh.window_stats.size());
    rh.outcome.gap = rh.avg_gap;
    rh.solve_seconds = secs;
    return rh;
}

} // namespace ngdr
