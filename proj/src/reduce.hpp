#ifndef NGDR_SRC_REDUCE_HPP
#define NGDR_SRC_REDUCE_HPP

#include <optional>
#include <vector>

#include "ngdr/milp.hpp"
#include "simplex.hpp"

namespace ngdr::detail {

// Exact reformulation of a MilpModel for the solver. Continuous variables
// that are uniquely determined by a chain of equality rows (e.g. state
// recursions driven by binaries) are substituted out; their values are
// reconstructed from the original rows after each solve, so the public
// solution always covers every model variable. The reformulation is
// solution-space isomorphic: objectives and feasibility are unchanged.
struct ReducedModel {
    const MilpModel* model = nullptr;

    std::vector<int> orig_to_red; // -1 when eliminated
    std::vector<int> red_to_orig;

    struct Elimination {
        int orig_var;
        int orig_row; // consumed equality row defining the variable
    };
    std::vector<Elimination> eliminations; // in substitution order

    LpProblem lp;                 // over kept variables; rows ranged
    std::vector<int> binaries;    // reduced indices, ascending
    double objective_shift = 0.0; // model constant + eliminated objective part

    // Detected infeasible during reduction (contradictory constant row).
    bool proven_infeasible = false;

    // Expands a reduced solution to original variable order, solving the
    // consumed equality rows by forward substitution.
    std::vector<double> reconstruct(const std::vector<double>& reduced_x) const;

    // Max violation of the original constraints and bounds at a full point.
    double max_violation(const std::vector<double>& full_x) const;

    double original_objective(const std::vector<double>& full_x) const;
};

ReducedModel reduce_model(const MilpModel& model);

} // namespace ngdr::detail

#endif
