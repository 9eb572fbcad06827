#ifndef NGDR_THERMAL_HPP
#define NGDR_THERMAL_HPP

#include <string>
#include <utility>
#include <vector>

#include "ngdr/grid.hpp"

namespace ngdr {

// Air and fuel properties entering the thermal-coefficient formulas.
struct PhysicalConstants {
    double ca = 0.718e3;   // isochoric specific heat of air, J/(kg K)
    double rho_a = 1.2754; // air density, kg/m^3
    double eg = 45938e3;   // specific heating value of natural gas, J/kg

    void validate() const;
};

// Geometry, insulation, furnace and temperature parameters for one house.
struct HouseParams {
    std::string id;
    double volume = 0.0;    // V, m^3
    double wall_area = 0.0; // A, m^2 (exposed wall surface)
    double kappa = 0.0;     // wall heat-transfer coefficient, W/(m^2 K)
    double burn_rate = 0.0; // furnace fuel burn rate Q, kg/s
    double theta0 = 0.0;    // initial indoor temperature, K
    double setpoint = 0.0;  // thermostat set-point, K

    void validate() const;
    // Fleet-generation conformance band for the burn rate, kg/s. Loaders
    // accept values outside it with a warning.
    static constexpr double kBurnRateSoftMin = 3e-5;
    static constexpr double kBurnRateSoftMax = 12e-5;
};

// Loss rate to ambient and heating gain per kg of fuel.
struct ThermalCoefficients {
    double alpha = 0.0; // 1/s
    double beta = 0.0;  // K/kg

    // Explicit forward stepping requires alpha * dt < 1.
    bool stable_for(double dt) const { return alpha * dt < 1.0; }
};

// Time-stamped forecast of the outside temperature. Offsets are seconds
// from the start of the full horizon, strictly increasing, first at 0.
class AmbientSeries {
public:
    AmbientSeries() = default;
    explicit AmbientSeries(std::vector<std::pair<double, double>> samples);

    // Linear interpolation between bracketing samples; exact at sample offsets.
    double at(double t) const;

    bool covers(double t) const;
    double span() const { return samples_.empty() ? 0.0 : samples_.back().first; }
    const std::vector<std::pair<double, double>>& samples() const { return samples_; }

private:
    std::vector<std::pair<double, double>> samples_;
};

// alpha = kappa*A / (ca*rho_a*V), beta = eg / (ca*rho_a*V).
ThermalCoefficients compute_thermal_coefficients(const PhysicalConstants& constants,
                                                 const HouseParams& house);

// One explicit forward step of the heating ODE:
//   theta' = -alpha*(theta - theta_amb) + beta*Q*q.
double euler_step(double theta, double theta_amb, const ThermalCoefficients& coeff,
                  double burn_rate, int q, double dt);

// Steps the ODE across the grid with q held constant within each control
// block. `ambient_offset` shifts the ambient lookups; the grid's t=0 maps to
// that absolute offset (used by receding-horizon windows).
Trajectory simulate_trajectory(const HouseParams& house, const ThermalCoefficients& coeff,
                               const AmbientSeries& ambient, const ControlSchedule& schedule,
                               const Grid& grid, double ambient_offset = 0.0);

} // namespace ngdr

#endif
