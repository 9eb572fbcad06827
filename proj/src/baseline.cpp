#include "ngdr/baseline.hpp"

#include <algorithm>

#include "ngdr/errors.hpp"

namespace ngdr {

int baseline_control(double theta, double setpoint) {
    return theta < setpoint ? 1 : 0;
}

std::vector<BaselineHouseRun> simulate_baseline(const std::vector<HouseParams>& fleet,
                                                const PhysicalConstants& constants,
                                                const AmbientSeries& ambient, const Grid& grid,
                                                double ambient_offset) {
    if (!ambient.covers(ambient_offset) ||
        !ambient.covers(ambient_offset + static_cast<double>(grid.horizon)))
        throw ValidationError("simulate_baseline: ambient series does not cover the grid span");

    std::vector<BaselineHouseRun> runs;
    runs.reserve(fleet.size());
    const double dt = static_cast<double>(grid.dt_state);
    const std::int64_t steps_per_block = grid.steps_per_block();

    for (const auto& house : fleet) {
        house.validate();
        const ThermalCoefficients coeff = compute_thermal_coefficients(constants, house);
        if (!coeff.stable_for(dt))
            throw ConfigError("simulate_baseline: grid dt_state violates stability for house " +
                              house.id);

        BaselineHouseRun run;
        run.schedule.values.resize(static_cast<std::size_t>(grid.num_blocks()));
        run.trajectory.samples.resize(static_cast<std::size_t>(grid.n) + 1);
        run.trajectory.samples[0] = house.theta0;

        double theta = house.theta0;
        for (std::int64_t b = 0; b < grid.num_blocks(); ++b) {
            const int q = baseline_control(theta, house.setpoint);
            run.schedule.values[static_cast<std::size_t>(b)] = static_cast<std::uint8_t>(q);
            for (std::int64_t s = 0; s < steps_per_block; ++s) {
                const std::int64_t k = b * steps_per_block + s;
                const double amb = ambient.at(ambient_offset + grid.time_at(k));
                theta = euler_step(theta, amb, coeff, house.burn_rate, q, dt);
                run.trajectory.samples[static_cast<std::size_t>(k + 1)] = theta;
            }
        }
        runs.push_back(std::move(run));
    }
    return runs;
}

AggregateDemand aggregate_demand(const std::vector<HouseParams>& fleet,
                                 const std::vector<ControlSchedule>& schedules, const Grid& grid) {
    if (fleet.size() != schedules.size())
        throw ShapeError("aggregate_demand: fleet size " + std::to_string(fleet.size()) +
                         " does not match schedule count " + std::to_string(schedules.size()));

    AggregateDemand demand;
    demand.samples.assign(static_cast<std::size_t>(grid.n), 0.0);
    for (std::size_t h = 0; h < fleet.size(); ++h) {
        schedules[h].check_matches(grid);
        for (std::int64_t k = 0; k < grid.n; ++k) {
            const auto b = static_cast<std::size_t>(grid.block_of_step(k));
            demand.samples[static_cast<std::size_t>(k)] +=
                fleet[h].burn_rate * schedules[h].values[b];
        }
    }
    return demand;
}

double peak_demand(const AggregateDemand& demand) {
    if (demand.samples.empty()) throw ValidationError("peak_demand: empty demand series");
    return *std::max_element(demand.samples.begin(), demand.samples.end());
}

} // namespace ngdr
