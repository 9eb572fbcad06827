#include "ngdr/ocp.hpp"

#include <algorithm>
#include <cmath>

#include "ngdr/errors.hpp"

namespace ngdr {

void Type1Config::validate() const {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw ValidationError("ocp: lambda must lie in [0,1], got " + std::to_string(lambda));
}

void Type2Config::validate() const {
    if (!(gamma > 0.0 && gamma <= 1.0))
        throw ValidationError("ocp: gamma must lie in (0,1], got " + std::to_string(gamma));
    if (!(peak > 0.0)) throw ValidationError("ocp: peak D must be positive");
}

namespace {

void check_build_inputs(const ThermalCoefficients& coeff, const AmbientSeries& ambient,
                        const Grid& grid, double ambient_offset) {
    if (!coeff.stable_for(static_cast<double>(grid.dt_state)))
        throw ConfigError("ocp: grid dt_state violates the stability limit alpha*dt < 1");
    if (!ambient.covers(ambient_offset) ||
        !ambient.covers(ambient_offset + static_cast<double>(grid.horizon)))
        throw ValidationError("ocp: ambient series does not cover the grid span");
}

// Emits the exact euler_step recursion, the initial condition, and the
// deviation band for one house. Returns the layout (without gas).
HouseVarLayout add_house_dynamics(MilpModel& m, const std::string& tag, const HouseParams& house,
                                  const ThermalCoefficients& coeff, const AmbientSeries& ambient,
                                  const Grid& grid, double ambient_offset) {
    const double kInfinity = std::numeric_limits<double>::infinity();
    const double dt = static_cast<double>(grid.dt_state);
    const auto n = static_cast<std::size_t>(grid.n);
    const auto blocks = static_cast<std::size_t>(grid.num_blocks());

    HouseVarLayout lay;
    lay.theta.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k)
        lay.theta.push_back(
            m.add_continuous("theta" + tag + "[" + std::to_string(k) + "]", -kInfinity, kInfinity));
    lay.q.reserve(blocks);
    for (std::size_t b = 0; b < blocks; ++b)
        lay.q.push_back(m.add_binary("q" + tag + "[" + std::to_string(b) + "]"));
    lay.delta = m.add_continuous("delta" + tag, 0.0, kInfinity);

    // theta(t_0) = theta0
    m.add_constraint({{lay.theta[0], 1.0}}, Relation::eq, house.theta0);

    // theta(t_{k+1}) - (1 - alpha*dt)*theta(t_k) - dt*beta*Q*q(block) = dt*alpha*Theta(t_k)
    const double decay = 1.0 - coeff.alpha * dt;
    const double heat = dt * coeff.beta * house.burn_rate;
    for (std::size_t k = 0; k < n; ++k) {
        const double amb = ambient.at(ambient_offset + grid.time_at(static_cast<std::int64_t>(k)));
        const int qb = lay.q[static_cast<std::size_t>(grid.block_of_step(static_cast<std::int64_t>(k)))];
        m.add_constraint(
            {{lay.theta[k + 1], 1.0}, {lay.theta[k], -decay}, {qb, -heat}}, Relation::eq,
            dt * coeff.alpha * amb);
    }

    // setpoint - delta <= theta(t_k) <= setpoint + delta for k >= 1
    for (std::size_t k = 1; k <= n; ++k) {
        m.add_constraint({{lay.theta[k], 1.0}, {lay.delta, 1.0}}, Relation::ge, house.setpoint);
        m.add_constraint({{lay.theta[k], 1.0}, {lay.delta, -1.0}}, Relation::le, house.setpoint);
    }
    return lay;
}

} // namespace

DecentralizedModel build_decentralized(const HouseParams& house, const ThermalCoefficients& coeff,
                                       const AmbientSeries& ambient, const Type1Config& cfg,
                                       const Grid& grid, double ambient_offset) {
    cfg.validate();
    house.validate();
    check_build_inputs(coeff, ambient, grid, ambient_offset);

    DecentralizedModel dm;
    MilpModel& m = dm.milp;
    dm.vars = add_house_dynamics(m, "", house, coeff, ambient, grid, ambient_offset);

    // G = Q * dt_control * sum_b q_b
    dm.vars.gas = m.add_continuous("gas", 0.0, std::numeric_limits<double>::infinity());
    std::vector<LinearTerm> gas_row{{dm.vars.gas, 1.0}};
    const double per_block = house.burn_rate * static_cast<double>(grid.dt_control);
    for (int qv : dm.vars.q) gas_row.push_back({qv, -per_block});
    m.add_constraint(std::move(gas_row), Relation::eq, 0.0);

    m.set_objective(dm.vars.delta, cfg.lambda);
    m.set_objective(dm.vars.gas, 1.0 - cfg.lambda);
    return dm;
}

CentralizedModel build_centralized(const std::vector<HouseParams>& fleet,
                                   const std::vector<ThermalCoefficients>& coeffs,
                                   const AmbientSeries& ambient, const Type2Config& cfg,
                                   const Grid& grid, double ambient_offset) {
    cfg.validate();
    if (fleet.empty()) throw ValidationError("ocp: centralized model needs a non-empty fleet");
    if (fleet.size() != coeffs.size())
        throw ShapeError("ocp: fleet and coefficient counts differ");

    CentralizedModel cm;
    MilpModel& m = cm.milp;
    cm.houses.reserve(fleet.size());
    for (std::size_t h = 0; h < fleet.size(); ++h) {
        fleet[h].validate();
        check_build_inputs(coeffs[h], ambient, grid, ambient_offset);
        cm.houses.push_back(add_house_dynamics(m, "[" + fleet[h].id + "]", fleet[h], coeffs[h],
                                               ambient, grid, ambient_offset));
    }

    // sum_h Q_h q_h(block) <= gamma * D at every control block
    const double cap = cfg.gamma * cfg.peak;
    for (std::int64_t b = 0; b < grid.num_blocks(); ++b) {
        std::vector<LinearTerm> row;
        row.reserve(fleet.size());
        for (std::size_t h = 0; h < fleet.size(); ++h)
            row.push_back({cm.houses[h].q[static_cast<std::size_t>(b)], fleet[h].burn_rate});
        m.add_constraint(std::move(row), Relation::le, cap);
    }

    if (cfg.objective == CentralObjective::mean_deviation) {
        const double w = 1.0 / static_cast<double>(fleet.size());
        for (const auto& lay : cm.houses) m.set_objective(lay.delta, w);
    } else {
        cm.max_dev = m.add_continuous("max_dev", 0.0, std::numeric_limits<double>::infinity());
        for (const auto& lay : cm.houses)
            m.add_constraint({{lay.delta, 1.0}, {cm.max_dev, -1.0}}, Relation::le, 0.0);
        m.set_objective(cm.max_dev, 1.0);
    }
    return cm;
}

double compute_deviation(const Trajectory& traj, double setpoint) {
    if (traj.samples.size() < 2)
        throw ValidationError("compute_deviation: trajectory has no samples past t=0");
    double worst = 0.0;
    for (std::size_t k = 1; k < traj.samples.size(); ++k)
        worst = std::max(worst, std::abs(setpoint - traj.samples[k]));
    return worst;
}

double compute_gas(const ControlSchedule& schedule, double burn_rate, const Grid& grid) {
    if (schedule.values.empty()) throw ValidationError("compute_gas: empty schedule");
    schedule.check_matches(grid);
    std::int64_t on_blocks = 0;
    for (auto q : schedule.values) on_blocks += q;
    return burn_rate * static_cast<double>(grid.dt_control) * static_cast<double>(on_blocks);
}

HouseOutcome extract_house_outcome(const MilpModel& model, const MilpSolution& sol,
                                   const HouseVarLayout& layout, const HouseParams& house,
                                   const ThermalCoefficients& coeff, const AmbientSeries& ambient,
                                   const Grid& grid, double ambient_offset) {
    (void)model;
    if (!(sol.status == SolveStatus::optimal || sol.status == SolveStatus::feasible_time_limit) ||
        !sol.has_incumbent())
        throw ValidationError("extract_outcome: solution status " +
                              std::string(to_string(sol.status)) + " has no incumbent");

    HouseOutcome out;
    out.house_id = house.id;
    out.schedule.values.resize(layout.q.size());
    for (std::size_t b = 0; b < layout.q.size(); ++b) {
        const double v = sol.values[static_cast<std::size_t>(layout.q[b])];
        const double r = std::round(v);
        if (std::abs(v - r) > kIntegralityTol)
            throw ConsistencyError("extract_outcome: binary " + std::to_string(layout.q[b]) +
                                   " not integral (" + std::to_string(v) + ")");
        out.schedule.values[b] = static_cast<std::uint8_t>(r);
    }

    out.trajectory = simulate_trajectory(house, coeff, ambient, out.schedule, grid, ambient_offset);
    for (std::size_t k = 0; k < out.trajectory.samples.size(); ++k) {
        const double milp_theta = sol.values[static_cast<std::size_t>(layout.theta[k])];
        if (std::abs(milp_theta - out.trajectory.samples[k]) > 1e-6)
            throw ConsistencyError("extract_outcome: re-simulated temperature differs from the "
                                   "model state at step " +
                                   std::to_string(k) + " by " +
                                   std::to_string(std::abs(milp_theta - out.trajectory.samples[k])) +
                                   " K");
    }
    out.delta = compute_deviation(out.trajectory, house.setpoint);
    out.gas = compute_gas(out.schedule, house.burn_rate, grid);
    return out;
}

SolveOutcome extract_outcome(const DecentralizedModel& model, const MilpSolution& sol,
                             const HouseParams& house, const ThermalCoefficients& coeff,
                             const AmbientSeries& ambient, const Type1Config& cfg, const Grid& grid,
                             double ambient_offset) {
    SolveOutcome out;
    out.houses.push_back(extract_house_outcome(model.milp, sol, model.vars, house, coeff, ambient,
                                               grid, ambient_offset));
    out.objective = cfg.lambda * out.houses[0].delta + (1.0 - cfg.lambda) * out.houses[0].gas;
    out.gap = sol.gap;
    out.status = sol.status;
    return out;
}

SolveOutcome extract_outcome(const CentralizedModel& model, const MilpSolution& sol,
                             const std::vector<HouseParams>& fleet,
                             const std::vector<ThermalCoefficients>& coeffs,
                             const AmbientSeries& ambient, const Type2Config& cfg, const Grid& grid,
                             double ambient_offset) {
    SolveOutcome out;
    out.houses.reserve(fleet.size());
    for (std::size_t h = 0; h < fleet.size(); ++h)
        out.houses.push_back(extract_house_outcome(model.milp, sol, model.houses[h], fleet[h],
                                                   coeffs[h], ambient, grid, ambient_offset));
    out.objective = central_objective(out.houses, cfg.objective);
    out.gap = sol.gap;
    out.status = sol.status;
    return out;
}

double central_objective(const std::vector<HouseOutcome>& houses, CentralObjective kind) {
    if (houses.empty()) throw ValidationError("central_objective: empty outcome set");
    if (kind == CentralObjective::mean_deviation) {
        double sum = 0.0;
        for (const auto& h : houses) sum += h.delta;
        return sum / static_cast<double>(houses.size());
    }
    double worst = 0.0;
    for (const auto& h : houses) worst = std::max(worst, h.delta);
    return worst;
}

} // namespace ngdr
