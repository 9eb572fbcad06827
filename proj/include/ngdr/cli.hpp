#ifndef NGDR_CLI_HPP
#define NGDR_CLI_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ngdr/ocp.hpp"

namespace ngdr {

// One batch run: mode, sweep parameters, grid, solver limits, and paths.
struct ScenarioSpec {
    enum class Mode { baseline, decentralized, centralized };

    Mode mode = Mode::baseline;
    std::string houses_path;
    std::string ambient_path;
    std::string out_dir = ".";

    double horizon_hours = 24.0;
    int dt_state_min = 1;
    int dt_control_min = 3;
    double t_rh_hours = 3.0;

    std::vector<double> lambdas; // decentralized sweep
    std::vector<double> gammas;  // centralized sweep
    CentralObjective objective = CentralObjective::max_deviation;

    double time_limit_s = std::numeric_limits<double>::infinity();
    double gap_tol = 1e-6;
    std::int64_t node_limit = std::numeric_limits<std::int64_t>::max();
    double peak_override = 0.0; // 0 = compute D from the baseline pass
    int threads = 0;            // 0 = hardware concurrency

    void validate() const;
    Grid make_grid() const;
};

// Exit codes: 0 success, 2 validation, 3 I/O, 4 internal consistency.
constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;
constexpr int kExitInternal = 4;

// Loads inputs, runs the requested scenarios end-to-end, and emits the
// CSV artifact set into out_dir. Prints one summary line per scenario.
// Returns an exit code instead of throwing; errors go to stderr as a
// single machine-readable line.
int run_scenario(const ScenarioSpec& spec);

} // namespace ngdr

#endif
