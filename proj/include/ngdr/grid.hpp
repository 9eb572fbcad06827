#ifndef NGDR_GRID_HPP
#define NGDR_GRID_HPP

#include <cstdint>
#include <vector>

#include "ngdr/errors.hpp"

namespace ngdr {

// Time discretization shared by the simulator and the MILP builders.
// State samples live at t_k = k * dt_state for k = 0..n; the on/off control
// is held constant over blocks of length dt_control (an integer number of
// state steps).
struct Grid {
    std::int64_t dt_state = 0;   // state step, seconds
    std::int64_t dt_control = 0; // control block length, seconds
    std::int64_t horizon = 0;    // total span T, seconds
    std::int64_t n = 0;          // number of state steps (horizon / dt_state)

    Grid() = default;

    Grid(std::int64_t dt_state_s, std::int64_t dt_control_s, std::int64_t horizon_s)
        : dt_state(dt_state_s), dt_control(dt_control_s), horizon(horizon_s) {
        if (dt_state <= 0) throw ConfigError("grid: dt_state must be positive");
        if (dt_control <= 0 || dt_control % dt_state != 0)
            throw ConfigError("grid: dt_control must be a positive multiple of dt_state");
        if (horizon <= 0 || horizon % dt_control != 0)
            throw ConfigError("grid: horizon must be a positive multiple of dt_control");
        n = horizon / dt_state;
    }

    std::int64_t steps_per_block() const { return dt_control / dt_state; }
    std::int64_t num_blocks() const { return horizon / dt_control; }
    // Control block that governs state step k (the step from t_k to t_{k+1}).
    std::int64_t block_of_step(std::int64_t k) const { return (k * dt_state) / dt_control; }
    double time_at(std::int64_t k) const { return static_cast<double>(k * dt_state); }
};

// Binary furnace on/off values, one per control block.
struct ControlSchedule {
    std::vector<std::uint8_t> values;

    ControlSchedule() = default;
    explicit ControlSchedule(std::vector<std::uint8_t> v) : values(std::move(v)) {
        for (auto q : values)
            if (q > 1) throw ValidationError("schedule: entries must be 0 or 1");
    }

    std::int64_t num_blocks() const { return static_cast<std::int64_t>(values.size()); }

    void check_matches(const Grid& grid) const {
        if (num_blocks() != grid.num_blocks())
            throw ShapeError("schedule: block count " + std::to_string(num_blocks()) +
                             " does not match grid (" + std::to_string(grid.num_blocks()) + ")");
    }
};

// Indoor temperature samples theta(t_k), k = 0..n, in K.
struct Trajectory {
    std::vector<double> samples;

    std::int64_t size() const { return static_cast<std::int64_t>(samples.size()); }
    double front() const { return samples.front(); }
    double back() const { return samples.back(); }
};

} // namespace ngdr

#endif
