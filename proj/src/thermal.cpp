#include "ngdr/thermal.hpp"

#include <algorithm>
#include <cmath>

#include "ngdr/errors.hpp"

namespace ngdr {

namespace {

void require_positive(double v, const char* field) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw ValidationError(std::string("thermal: ") + field + " must be strictly positive");
}

constexpr double kTempSaneLo = 230.0; // K
constexpr double kTempSaneHi = 330.0; // K

} // namespace

void PhysicalConstants::validate() const {
    require_positive(ca, "ca");
    require_positive(rho_a, "rho_a");
    require_positive(eg, "eg");
}

void HouseParams::validate() const {
    require_positive(volume, "volume");
    require_positive(wall_area, "wall_area");
    require_positive(kappa, "kappa");
    require_positive(burn_rate, "burn_rate");
    if (theta0 < kTempSaneLo || theta0 > kTempSaneHi)
        throw ValidationError("thermal: theta0 outside sanity band [230 K, 330 K] for house " + id);
    if (setpoint < kTempSaneLo || setpoint > kTempSaneHi)
        throw ValidationError("thermal: setpoint outside sanity band [230 K, 330 K] for house " + id);
}

ThermalCoefficients compute_thermal_coefficients(const PhysicalConstants& constants,
                                                 const HouseParams& house) {
    constants.validate();
    house.validate();
    const double heat_capacity = constants.ca * constants.rho_a * house.volume; // J/K
    ThermalCoefficients coeff;
    coeff.alpha = house.kappa * house.wall_area / heat_capacity;
    coeff.beta = constants.eg / heat_capacity;
    return coeff;
}

AmbientSeries::AmbientSeries(std::vector<std::pair<double, double>> samples)
    : samples_(std::move(samples)) {
    if (samples_.empty()) throw ValidationError("ambient: series must be non-empty");
    if (samples_.front().first != 0.0)
        throw ValidationError("ambient: first sample offset must be 0");
    for (std::size_t i = 1; i < samples_.size(); ++i) {
        if (!(samples_[i].first > samples_[i - 1].first))
            throw ValidationError("ambient: offsets must be strictly increasing");
    }
    for (const auto& [t, v] : samples_) {
        if (!std::isfinite(t) || !std::isfinite(v))
            throw ValidationError("ambient: non-finite sample");
    }
}

bool AmbientSeries::covers(double t) const {
    return !samples_.empty() && t >= 0.0 && t <= samples_.back().first;
}

double AmbientSeries::at(double t) const {
    if (!covers(t))
        throw ValidationError("ambient: query t=" + std::to_string(t) +
                              " outside coverage [0, " + std::to_string(span()) + "]");
    auto it = std::lower_bound(samples_.begin(), samples_.end(), t,
                               [](const auto& s, double v) { return s.first < v; });
    if (it != samples_.end() && it->first == t) return it->second;
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double w = (t - lo.first) / (hi.first - lo.first);
    return lo.second + w * (hi.second - lo.second);
}

double euler_step(double theta, double theta_amb, const ThermalCoefficients& coeff,
                  double burn_rate, int q, double dt) {
    if (!(dt > 0.0)) throw ConfigError("euler_step: dt must be positive");
    if (q != 0 && q != 1) throw ValidationError("euler_step: q must be 0 or 1");
    if (!coeff.stable_for(dt))
        throw ConfigError("euler_step: alpha*dt = " + std::to_string(coeff.alpha * dt) +
                          " >= 1 violates the forward-scheme stability limit");
    return theta + dt * (-coeff.alpha * (theta - theta_amb) + coeff.beta * burn_rate * q);
}

Trajectory simulate_trajectory(const HouseParams& house, const ThermalCoefficients& coeff,
                               const AmbientSeries& ambient, const ControlSchedule& schedule,
                               const Grid& grid, double ambient_offset) {
    schedule.check_matches(grid);
    if (!ambient.covers(ambient_offset) ||
        !ambient.covers(ambient_offset + static_cast<double>(grid.horizon)))
        throw ValidationError("simulate_trajectory: ambient series does not cover the grid span");
    if (!coeff.stable_for(static_cast<double>(grid.dt_state)))
        throw ConfigError("simulate_trajectory: grid dt_state violates stability limit");

    const double dt = static_cast<double>(grid.dt_state);
    Trajectory traj;
    traj.samples.resize(static_cast<std::size_t>(grid.n) + 1);
    traj.samples[0] = house.theta0;
    for (std::int64_t k = 0; k < grid.n; ++k) {
        const int q = schedule.values[static_cast<std::size_t>(grid.block_of_step(k))];
        const double amb = ambient.at(ambient_offset + grid.time_at(k));
        traj.samples[static_cast<std::size_t>(k + 1)] =
            euler_step(traj.samples[static_cast<std::size_t>(k)], amb, coeff, house.burn_rate, q, dt);
    }
    return traj;
}

} // namespace ngdr
