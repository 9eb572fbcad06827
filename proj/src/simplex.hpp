#ifndef NGDR_SRC_SIMPLEX_HPP
#define NGDR_SRC_SIMPLEX_HPP

#include <cstdint>
#include <limits>
#include <vector>

#include "ngdr/milp.hpp"

namespace ngdr::detail {

constexpr double kInf = std::numeric_limits<double>::infinity();

// LP in computational form: minimize cost'x over structural variables x
// with bounds lower <= x <= upper, subject to ranged rows
// lo_r <= a_r'x <= hi_r. Rows are activated lazily by the caller; an
// inactive row simply does not constrain the current solve (dropping rows
// relaxes the problem, so objectives of partially activated solves are
// valid lower bounds for the full LP).
struct LpProblem {
    struct Row {
        std::vector<LinearTerm> terms; // structural vars only, ascending var index
        double lo = -kInf;
        double hi = kInf;
    };
    std::vector<double> lower, upper, cost;
    std::vector<Row> rows;

    int num_vars() const { return static_cast<int>(cost.size()); }
    int num_rows() const { return static_cast<int>(rows.size()); }
};

enum class LpStatus { optimal, infeasible, unbounded, stalled };

// Bounded-variable revised primal simplex with a dense basis inverse.
//
// Each active row r carries a logical variable s_r = a_r'x (the row
// activity) with bounds [lo_r, hi_r]; the augmented system is
// a_r'x - s_r = 0. The initial basis is the logical identity. Pricing is
// Dantzig (most negative reduced cost, ties by lowest variable index);
// the ratio test blocks at the nearest bound crossing with ties by lowest
// variable index; after a run of degenerate pivots the solver switches to
// Bland's rule, which guarantees termination. Phase 1 minimizes the sum
// of bound violations of basic variables with the composite-cost scheme.
//
// The instance is warm-startable: variable bounds may be tightened or
// relaxed and rows activated between solves; the basis is kept and primal
// feasibility is repaired by phase 1.
class SimplexSolver {
public:
    explicit SimplexSolver(const LpProblem& problem);

    // Activates global rows (ignores rows already active). Their logicals
    // enter the basis, so the current basis stays valid.
    void activate_rows(const std::vector<int>& global_rows);

    // Overrides a structural variable's bounds (branch-and-bound fixings).
    void set_var_bounds(int var, double lo, double hi);

    LpStatus solve();

    double objective() const;
    // Structural variable values of the last solve.
    std::vector<double> solution() const;
    // Unbounded direction in structural space (valid after status unbounded).
    const std::vector<double>& ray() const { return ray_; }

    int num_active_rows() const { return static_cast<int>(active_rows_.size()); }
    bool is_active(int global_row) const { return row_pos_[global_row] >= 0; }
    std::int64_t iterations() const { return total_iterations_; }

    double var_lower(int var) const { return lb_[var]; }
    double var_upper(int var) const { return ub_[var]; }

private:
    enum class VStatus : std::uint8_t { basic, at_lower, at_upper, free_nb };

    const LpProblem& prob_;
    int nstruct_;

    // Variable space: [0, nstruct_) structural, [nstruct_, nstruct_+#rows)
    // logicals indexed by global row id.
    std::vector<double> lb_, ub_;
    std::vector<double> x_;
    std::vector<VStatus> status_;

    std::vector<int> active_rows_;  // position -> global row id
    std::vector<int> row_pos_;      // global row id -> position or -1
    std::vector<int> basis_;        // position -> variable id
    std::vector<int> basic_pos_;    // variable id -> position or -1

    // Dense basis inverse, column-major, m x m with m = active rows.
    std::vector<double> binv_;

    // Column adjacency over active rows for structural vars.
    std::vector<std::vector<std::pair<int, double>>> cols_; // var -> (position, coef)

    std::vector<double> ray_;
    std::int64_t total_iterations_ = 0;

    int m() const { return static_cast<int>(active_rows_.size()); }
    int logical_of_pos(int pos) const { return nstruct_ + active_rows_[pos]; }

    void ftran_column(int var, std::vector<double>& t) const;
    void compute_duals(const std::vector<double>& cb, std::vector<double>& y) const;
    void compute_reduced_costs(const std::vector<double>& y, const std::vector<double>& cn_struct,
                               std::vector<double>& d) const;
    void refresh_basic_values();
    void refactorize();
    double infeasibility() const;
    void pivot(int entering, int leaving_pos, const std::vector<double>& t);
    void update_nonbasic_value(int var);

    // One priced iteration; returns false when the current phase is optimal.
    // `phase1` selects composite costs. Sets unbounded/entering info and the
    // primal step length taken (for degeneracy tracking).
    bool iterate(bool phase1, bool bland, bool& unbounded, int& unbounded_var, int& unbounded_dir,
                 double& step_taken, std::vector<double>& t_out);
};

} // namespace ngdr::detail

#endif
