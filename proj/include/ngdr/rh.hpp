#ifndef NGDR_RH_HPP
#define NGDR_RH_HPP

#include <cstdint>
#include <vector>

#include "ngdr/ocp.hpp"

namespace ngdr {

// Contiguous, non-overlapping windows partitioning [0, T]; all but
// possibly the last have length t_rh.
struct RhPlan {
    std::vector<std::pair<std::int64_t, std::int64_t>> windows; // (start, end) seconds
    std::int64_t t_rh = 0;

    std::size_t size() const { return windows.size(); }
};

RhPlan plan_windows(std::int64_t horizon, std::int64_t t_rh, const Grid& grid);

// One MILP solve inside a receding-horizon run.
struct WindowStat {
    int window = 0;
    SolveStatus status = SolveStatus::optimal;
    double objective = 0.0;
    double bound = 0.0;
    double gap = 0.0;
    std::int64_t nodes = 0;
    double seconds = 0.0;
};

struct RhOutcome {
    SolveOutcome outcome; // stitched over the full horizon
    std::vector<WindowStat> window_stats;
    double avg_gap = 0.0;
    double solve_seconds = 0.0;
};

// Sequential window chaining: window i starts from window (i-1)'s final
// re-simulated temperature. The decentralized variant solves one MILP per
// house per window (houses in parallel across `threads` workers); the
// centralized variant solves one coupled MILP per window. Stitched
// trajectories, deviations, and gas totals are recomputed over (0, T].
RhOutcome run_receding_horizon(const std::vector<HouseParams>& fleet,
                               const std::vector<ThermalCoefficients>& coeffs,
                               const AmbientSeries& ambient, const Type1Config& cfg,
                               const Grid& full_grid, std::int64_t t_rh, const SolveOptions& opts,
                               int threads = 0);

RhOutcome run_receding_horizon(const std::vector<HouseParams>& fleet,
                               const std::vector<ThermalCoefficients>& coeffs,
                               const AmbientSeries& ambient, const Type2Config& cfg,
                               const Grid& full_grid, std::int64_t t_rh, const SolveOptions& opts);

} // namespace ngdr

#endif
