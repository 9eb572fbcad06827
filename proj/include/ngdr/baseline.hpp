#ifndef NGDR_BASELINE_HPP
#define NGDR_BASELINE_HPP

#include <vector>

#include "ngdr/thermal.hpp"

namespace ngdr {

// Total gas mass flow rate per state step, kg/s. Sample k covers the burn
// during [t_k, t_{k+1}), so the series has grid.n entries and integrates
// exactly to the blockwise gas totals.
struct AggregateDemand {
    std::vector<double> samples;
};

struct BaselineHouseRun {
    ControlSchedule schedule;
    Trajectory trajectory;
};

// Instantaneous thermostat policy: on below set-point, off at or above it
// (Heaviside with H(0) = 0).
int baseline_control(double theta, double setpoint);

// Simulates every house under the instantaneous policy, with the on/off
// decision taken at each control-block boundary and held for the block.
// Houses are independent; results are returned in fleet order.
std::vector<BaselineHouseRun> simulate_baseline(const std::vector<HouseParams>& fleet,
                                                const PhysicalConstants& constants,
                                                const AmbientSeries& ambient, const Grid& grid,
                                                double ambient_offset = 0.0);

// Sum of Q_h * q_h(t_k) over the fleet, with block values expanded to
// state steps.
AggregateDemand aggregate_demand(const std::vector<HouseParams>& fleet,
                                 const std::vector<ControlSchedule>& schedules, const Grid& grid);

// Maximum sample of the demand series (the baseline peak D when applied to
// the baseline run).
double peak_demand(const AggregateDemand& demand);

} // namespace ngdr

#endif
