#ifndef NGDR_TESTS_ORACLE_HPP
#define NGDR_TESTS_ORACLE_HPP

#include <cstdint>
#include <vector>

#include "ngdr/ocp.hpp"
#include "rng.hpp"

namespace ngdr::test {

// A desk-sized instance the exhaustive oracle can enumerate.
struct ToyInstance {
    std::vector<HouseParams> fleet;
    std::vector<ThermalCoefficients> coeffs;
    AmbientSeries ambient;
    Grid grid;
};

// Independent euler stepping (deliberately not simulate_trajectory) used by
// the oracle below.
std::vector<double> oracle_simulate(const ToyInstance& inst, std::size_t house,
                                    const std::vector<int>& schedule, double theta0);

double oracle_deviation(const std::vector<double>& traj, double setpoint);
double oracle_gas(const std::vector<int>& schedule, double burn_rate, const Grid& grid);

struct EnumResult {
    bool feasible = false;
    double objective = 0.0;
    std::vector<std::vector<int>> schedules; // per house, per block
};

// Brute force over all 2^B schedules of one house.
EnumResult enumerate_decentralized(const ToyInstance& inst, std::size_t house, double lambda);

// Brute force over all (2^B)^H schedule combinations subject to the peak cap.
EnumResult enumerate_centralized(const ToyInstance& inst, const Type2Config& cfg);

// Random toy instance; total binaries (houses * blocks) stay enumerable.
ToyInstance random_instance(Rng& rng, int houses, int blocks);

} // namespace ngdr::test

#endif
