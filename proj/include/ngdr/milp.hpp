#ifndef NGDR_MILP_HPP
#define NGDR_MILP_HPP

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace ngdr {

enum class VarKind { continuous, binary };

enum class Relation { le, eq, ge };

struct LinearTerm {
    int var;
    double coef;
};

struct Variable {
    std::string name;
    VarKind kind = VarKind::continuous;
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
};

struct Constraint {
    std::vector<LinearTerm> terms;
    Relation rel = Relation::le;
    double rhs = 0.0;
};

// Generic linear model over binary and continuous variables. The objective
// sense is always minimize.
struct MilpModel {
    std::vector<Variable> variables;
    std::vector<Constraint> constraints;
    std::vector<double> objective; // one coefficient per variable
    double objective_constant = 0.0;

    int add_continuous(std::string name, double lower, double upper);
    int add_binary(std::string name);
    void add_constraint(std::vector<LinearTerm> terms, Relation rel, double rhs);
    void set_objective(int var, double coef);

    int num_vars() const { return static_cast<int>(variables.size()); }
    std::size_t num_binaries() const;

    // Checks the container invariants: binary bounds within [0,1], finite
    // coefficients, in-range variable references, lower <= upper.
    void validate() const;
};

enum class SolveStatus { optimal, feasible_time_limit, infeasible, unbounded };

const char* to_string(SolveStatus status);

struct MilpSolution {
    SolveStatus status = SolveStatus::infeasible;
    std::vector<double> values; // one entry per model variable when an incumbent exists
    double objective_value = std::numeric_limits<double>::infinity();
    double best_bound = -std::numeric_limits<double>::infinity();
    double gap = std::numeric_limits<double>::infinity();
    std::int64_t nodes = 0;
    std::int64_t lp_iterations = 0;
    double solve_seconds = 0.0;

    bool has_incumbent() const { return !values.empty(); }
};

struct SolveOptions {
    double gap_tol = 1e-6;
    double time_limit_s = std::numeric_limits<double>::infinity();
    std::int64_t node_limit = std::numeric_limits<std::int64_t>::max();
};

// Fixed solver tolerances, documented for cross-checking.
constexpr double kFeasibilityTol = 1e-7;
constexpr double kIntegralityTol = 1e-6;

// Solves the model with binaries relaxed to [0,1]. The optimal basis is
// deterministic under the fixed pivoting rule.
MilpSolution solve_lp_relaxation(const MilpModel& model);

// Best-first branch-and-bound over the binaries. Branching picks the most
// fractional variable (ties by lowest index); node order is best bound
// (ties by insertion order). Time/node limits terminate with the best
// incumbent and a valid global bound, never an error.
MilpSolution solve_milp(const MilpModel& model, const SolveOptions& options = {});

// Plain-text dump (objective, rows, bounds, binaries) for external
// cross-checking; the grammar is documented in the README.
void dump_lp(const MilpModel& model, std::ostream& out);

} // namespace ngdr

#endif
