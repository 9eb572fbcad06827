#ifndef NGDR_OCP_HPP
#define NGDR_OCP_HPP

#include <string>
#include <vector>

#include "ngdr/baseline.hpp"
#include "ngdr/milp.hpp"
#include "ngdr/thermal.hpp"

namespace ngdr {

// Decentralized look-ahead configuration: minimize
// lambda * Delta + (1 - lambda) * G for one house.
struct Type1Config {
    double lambda = 1.0; // trade-off weight in [0,1]

    void validate() const;
};

enum class CentralObjective { mean_deviation, max_deviation };

// Centralized configuration: peak-shaving cap gamma * D on the aggregate
// flow, minimizing mean or max discomfort.
struct Type2Config {
    double gamma = 1.0; // curtailment factor in (0,1]
    double peak = 0.0;  // baseline peak D, kg/s
    CentralObjective objective = CentralObjective::max_deviation;

    void validate() const;
};

// Variable layout of a built model, used to read solutions back.
struct HouseVarLayout {
    std::vector<int> theta; // state vars, k = 0..n
    std::vector<int> q;     // one binary per control block
    int delta = -1;
    int gas = -1; // decentralized only
};

struct DecentralizedModel {
    MilpModel milp;
    HouseVarLayout vars;
};

struct CentralizedModel {
    MilpModel milp;
    std::vector<HouseVarLayout> houses;
    int max_dev = -1; // epigraph variable for the max-deviation objective
};

struct HouseOutcome {
    std::string house_id;
    ControlSchedule schedule;
    Trajectory trajectory;
    double delta = 0.0; // K, max |setpoint - theta| over (0, T]
    double gas = 0.0;   // kg
};

struct SolveOutcome {
    std::vector<HouseOutcome> houses;
    double objective = 0.0;
    double gap = 0.0;
    SolveStatus status = SolveStatus::optimal;
};

// Exact discretization of the look-ahead OCP for one house: the euler_step
// recursion as equality rows, the deviation band for k >= 1, and the gas
// total G = Q * dt_control * sum(q).
DecentralizedModel build_decentralized(const HouseParams& house, const ThermalCoefficients& coeff,
                                       const AmbientSeries& ambient, const Type1Config& cfg,
                                       const Grid& grid, double ambient_offset = 0.0);

// Per-house dynamics and deviation bands plus the coupling rows
// sum_h Q_h q_h <= gamma * D at every control block.
CentralizedModel build_centralized(const std::vector<HouseParams>& fleet,
                                   const std::vector<ThermalCoefficients>& coeffs,
                                   const AmbientSeries& ambient, const Type2Config& cfg,
                                   const Grid& grid, double ambient_offset = 0.0);

// Reads schedules from the solution binaries, re-simulates trajectories
// through the thermal stepper (never trusting the LP state variables), and
// recomputes Delta and G. Solution theta values deviating from the
// re-simulation by more than 1e-6 K raise a ConsistencyError.
HouseOutcome extract_house_outcome(const MilpModel& model, const MilpSolution& sol,
                                   const HouseVarLayout& layout, const HouseParams& house,
                                   const ThermalCoefficients& coeff, const AmbientSeries& ambient,
                                   const Grid& grid, double ambient_offset = 0.0);

SolveOutcome extract_outcome(const DecentralizedModel& model, const MilpSolution& sol,
                             const HouseParams& house, const ThermalCoefficients& coeff,
                             const AmbientSeries& ambient, const Type1Config& cfg, const Grid& grid,
                             double ambient_offset = 0.0);

SolveOutcome extract_outcome(const CentralizedModel& model, const MilpSolution& sol,
                             const std::vector<HouseParams>& fleet,
                             const std::vector<ThermalCoefficients>& coeffs,
                             const AmbientSeries& ambient, const Type2Config& cfg, const Grid& grid,
                             double ambient_offset = 0.0);

// Max |setpoint - theta(t_k)| over k = 1..n (the initial state is excluded).
double compute_deviation(const Trajectory& traj, double setpoint);

// G = Q * dt_control * (number of on blocks), kg.
double compute_gas(const ControlSchedule& schedule, double burn_rate, const Grid& grid);

double central_objective(const std::vector<HouseOutcome>& houses, CentralObjective kind);

} // namespace ngdr

#endif
