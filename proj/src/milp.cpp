#include "ngdr/milp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <queue>

#include "ngdr/errors.hpp"
#include "reduce.hpp"
#include "simplex.hpp"

namespace ngdr {

using detail::kInf;
using detail::LpStatus;
using detail::ReducedModel;
using detail::SimplexSolver;

// ---------------------------------------------------------------------------
// MilpModel

int MilpModel::add_continuous(std::string name, double lower, double upper) {
    variables.push_back({std::move(name), VarKind::continuous, lower, upper});
    objective.push_back(0.0);
    return num_vars() - 1;
}

int MilpModel::add_binary(std::string name) {
    variables.push_back({std::move(name), VarKind::binary, 0.0, 1.0});
    objective.push_back(0.0);
    return num_vars() - 1;
}

void MilpModel::add_constraint(std::vector<LinearTerm> terms, Relation rel, double rhs) {
    constraints.push_back({std::move(terms), rel, rhs});
}

void MilpModel::set_objective(int var, double coef) { objective[var] = coef; }

std::size_t MilpModel::num_binaries() const {
    std::size_t count = 0;
    for (const auto& v : variables)
        if (v.kind == VarKind::binary) ++count;
    return count;
}

void MilpModel::validate() const {
    if (objective.size() != variables.size())
        throw ValidationError("milp: objective size does not match variable count");
    for (const auto& v : variables) {
        if (std::isnan(v.lower) || std::isnan(v.upper))
            throw ValidationError("milp: NaN bound on variable " + v.name);
        if (v.lower > v.upper)
            throw ValidationError("milp: empty bound interval on variable " + v.name);
        if (v.kind == VarKind::binary && (v.lower < 0.0 || v.upper > 1.0))
            throw ValidationError("milp: binary variable " + v.name + " has bounds outside [0,1]");
    }
    for (double c : objective)
        if (!std::isfinite(c)) throw ValidationError("milp: non-finite objective coefficient");
    if (!std::isfinite(objective_constant))
        throw ValidationError("milp: non-finite objective constant");
    for (const auto& c : constraints) {
        if (!std::isfinite(c.rhs)) throw ValidationError("milp: non-finite constraint rhs");
        for (const auto& t : c.terms) {
            if (t.var < 0 || t.var >= num_vars())
                throw ValidationError("milp: constraint references undeclared variable");
            if (!std::isfinite(t.coef))
                throw ValidationError("milp: non-finite constraint coefficient");
        }
    }
}

const char* to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::feasible_time_limit: return "feasible_time_limit";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::unbounded: return "unbounded";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// Lazy-row LP driver
//
// Rows start inactive; after each simplex solve, violated rows are activated
// (most violated first, ties by row id) and the solve repeats. Because
// dropping rows only relaxes the problem, the objective of any intermediate
// optimal solve is a valid lower bound for the fully constrained LP; the
// loop reports whether separation ran to convergence.

namespace {

constexpr int kMaxActiveRows = 4096;
constexpr int kRowCapSlack = 2048; // emergency headroom for correctness-critical rows
constexpr int kAddPerRound = 256;

struct LazyResult {
    LpStatus status = LpStatus::stalled;
    bool fully_separated = false;
    double objective = 0.0; // reduced-space objective, no shift
};

class LazyLp {
public:
    LazyLp(const ReducedModel& rm, int max_rows)
        : rm_(rm), simplex_(rm.lp), max_rows_(max_rows) {}

    SimplexSolver& simplex() { return simplex_; }

    // Rows violated at x, most violated first (ties by row id).
    std::vector<int> violated_rows(const std::vector<double>& x, double tol) const {
        std::vector<std::pair<double, int>> hits;
        const int nrows = rm_.lp.num_rows();
        for (int r = 0; r < nrows; ++r) {
            if (simplex_.is_active(r)) continue;
            const auto& row = rm_.lp.rows[r];
            double act = 0.0;
            for (const auto& t : row.terms) act += t.coef * x[t.var];
            double v = 0.0;
            if (act < row.lo) v = row.lo - act;
            if (act > row.hi) v = std::max(v, act - row.hi);
            if (v > tol) hits.emplace_back(-v, r);
        }
        std::sort(hits.begin(), hits.end());
        std::vector<int> ids;
        ids.reserve(hits.size());
        for (const auto& [nv, r] : hits) ids.push_back(r);
        return ids;
    }

    LazyResult solve(int max_rounds, bool allow_cap_slack = false) {
        LazyResult res;
        const int hard_cap = max_rows_ + (allow_cap_slack ? kRowCapSlack : 0);
        for (int round = 0; round < max_rounds; ++round) {
            const LpStatus st = simplex_.solve();
            if (st == LpStatus::infeasible || st == LpStatus::stalled) {
                res.status = st;
                return res;
            }
            if (st == LpStatus::unbounded) {
                // Activate rows that block the unbounded ray; with none the
                // full LP is unbounded too.
                const auto& ray = simplex_.ray();
                std::vector<std::pair<double, int>> blockers;
                for (int r = 0; r < rm_.lp.num_rows(); ++r) {
                    if (simplex_.is_active(r)) continue;
                    const auto& row = rm_.lp.rows[r];
                    double rate = 0.0;
                    for (const auto& t : row.terms) rate += t.coef * ray[t.var];
                    if (rate > 1e-9 && std::isfinite(row.hi)) blockers.emplace_back(-rate, r);
                    if (rate < -1e-9 && std::isfinite(row.lo)) blockers.emplace_back(rate, r);
                }
                if (blockers.empty()) {
                    res.status = LpStatus::unbounded;
                    return res;
                }
                std::sort(blockers.begin(), blockers.end());
                std::vector<int> ids;
                for (std::size_t i = 0; i < blockers.size() && i < kAddPerRound; ++i)
                    ids.push_back(blockers[i].second);
                simplex_.activate_rows(ids);
                continue;
            }
            // Optimal for the active subset: separate.
            const auto x = simplex_.solution();
            auto ids = violated_rows(x, 1e-9);
            if (ids.empty()) {
                res.status = LpStatus::optimal;
                res.fully_separated = true;
                res.objective = simplex_.objective();
                return res;
            }
            if (simplex_.num_active_rows() >= hard_cap) {
                res.status = LpStatus::optimal;
                res.fully_separated = false;
                res.objective = simplex_.objective();
                return res;
            }
            if (ids.size() > kAddPerRound) ids.resize(kAddPerRound);
            simplex_.activate_rows(ids);
        }
        // Round budget exhausted: last solve was optimal for its subset.
        res.status = LpStatus::optimal;
        res.fully_separated = false;
        res.objective = simplex_.objective();
        return res;
    }

private:
    const ReducedModel& rm_;
    SimplexSolver simplex_;
    int max_rows_;
};

// Solves the continuous part with all binaries fixed to `binary_values`
// on a fresh solver, to evaluate an incumbent candidate exactly. Returns
// the full-model point when it is feasible within kFeasibilityTol.
struct RepairOutcome {
    bool feasible = false;
    std::vector<double> full_x;
    double objective = 0.0;
    std::int64_t iterations = 0;
};

RepairOutcome evaluate_with_fixed_binaries(const ReducedModel& rm,
                                           const std::vector<double>& binary_values) {
    RepairOutcome out;
    LazyLp lazy(rm, kMaxActiveRows);
    for (std::size_t i = 0; i < rm.binaries.size(); ++i) {
        const int var = rm.binaries[i];
        lazy.simplex().set_var_bounds(var, binary_values[i], binary_values[i]);
    }
    const LazyResult res = lazy.solve(400, /*allow_cap_slack=*/true);
    out.iterations = lazy.simplex().iterations();
    if (res.status != LpStatus::optimal || !res.fully_separated) return out;
    out.full_x = rm.reconstruct(lazy.simplex().solution());
    if (rm.max_violation(out.full_x) > kFeasibilityTol) return out;
    out.feasible = true;
    out.objective = rm.original_objective(out.full_x);
    return out;
}

// Deterministic rounding dive: round binaries to the nearest integer, then
// repair rows that involve binaries only (flip ones off by ascending
// fractional value for <= rows, zeros on by descending value for >= rows),
// and evaluate with the continuous repair LP.
std::vector<double> rounded_binaries(const ReducedModel& rm, const std::vector<double>& x,
                                     const SimplexSolver& simplex) {
    std::vector<double> vals(rm.binaries.size());
    for (std::size_t i = 0; i < rm.binaries.size(); ++i) {
        const int var = rm.binaries[i];
        double v = std::round(x[var]);
        v = std::min(std::max(v, simplex.var_lower(var)), simplex.var_upper(var));
        vals[i] = v;
    }
    return vals;
}

void repair_binary_rows(const ReducedModel& rm, const std::vector<double>& x_frac,
                        std::vector<double>& vals, const SimplexSolver& simplex) {
    std::vector<int> red_to_bin(rm.lp.num_vars(), -1);
    for (std::size_t i = 0; i < rm.binaries.size(); ++i) red_to_bin[rm.binaries[i]] = static_cast<int>(i);

    for (int r = 0; r < rm.lp.num_rows(); ++r) {
        const auto& row = rm.lp.rows[r];
        bool binary_only = true;
        for (const auto& t : row.terms)
            if (red_to_bin[t.var] < 0) {
                binary_only = false;
                break;
            }
        if (!binary_only) continue;
        auto activity = [&]() {
            double act = 0.0;
            for (const auto& t : row.terms) act += t.coef * vals[red_to_bin[t.var]];
            return act;
        };
        // Candidates that reduce the activity when switched off, cheapest
        // (most fractional toward zero) first, ties by variable id.
        if (activity() > row.hi + 1e-9) {
            std::vector<std::pair<double, int>> cands;
            for (const auto& t : row.terms) {
                const int bi = red_to_bin[t.var];
                const bool fixed = simplex.var_upper(rm.binaries[bi]) ==
                                   simplex.var_lower(rm.binaries[bi]);
                if (fixed) continue;
                if (t.coef > 0.0 && vals[bi] == 1.0) cands.emplace_back(x_frac[t.var], t.var);
                if (t.coef < 0.0 && vals[bi] == 0.0) cands.emplace_back(1.0 - x_frac[t.var], t.var);
            }
            std::sort(cands.begin(), cands.end());
            for (const auto& [score, var] : cands) {
                if (activity() <= row.hi + 1e-9) break;
                vals[red_to_bin[var]] = vals[red_to_bin[var]] == 1.0 ? 0.0 : 1.0;
            }
        }
        if (activity() < row.lo - 1e-9) {
            std::vector<std::pair<double, int>> cands;
            for (const auto& t : row.terms) {
                const int bi = red_to_bin[t.var];
                const bool fixed = simplex.var_upper(rm.binaries[bi]) ==
                                   simplex.var_lower(rm.binaries[bi]);
                if (fixed) continue;
                if (t.coef > 0.0 && vals[bi] == 0.0) cands.emplace_back(1.0 - x_frac[t.var], t.var);
                if (t.coef < 0.0 && vals[bi] == 1.0) cands.emplace_back(x_frac[t.var], t.var);
            }
            std::sort(cands.begin(), cands.end());
            for (const auto& [score, var] : cands) {
                if (activity() >= row.lo - 1e-9) break;
                vals[red_to_bin[var]] = vals[red_to_bin[var]] == 1.0 ? 0.0 : 1.0;
            }
        }
    }
}

struct BnbNode {
    int parent = -1;
    int fix_var = -1; // reduced index
    std::uint8_t fix_val = 0;
    double bound = -kInf;
    std::int64_t seq = 0;
};

} // namespace

// ---------------------------------------------------------------------------
// Public solves

MilpSolution solve_lp_relaxation(const MilpModel& model) {
    model.validate();
    const auto t0 = std::chrono::steady_clock::now();
    MilpSolution sol;
    const ReducedModel rm = detail::reduce_model(model);
    if (rm.proven_infeasible) {
        sol.status = SolveStatus::infeasible;
        return sol;
    }
    LazyLp lazy(rm, kMaxActiveRows);
    const LazyResult res = lazy.solve(2000, /*allow_cap_slack=*/true);
    sol.lp_iterations = lazy.simplex().iterations();
    if (res.status == LpStatus::infeasible) {
        sol.status = SolveStatus::infeasible;
    } else if (res.status == LpStatus::unbounded) {
        sol.status = SolveStatus::unbounded;
        sol.best_bound = -kInf;
    } else if (res.status == LpStatus::optimal && res.fully_separated) {
        sol.status = SolveStatus::optimal;
        sol.values = rm.reconstruct(lazy.simplex().solution());
        sol.objective_value = res.objective + rm.objective_shift;
        sol.best_bound = sol.objective_value;
        sol.gap = 0.0;
    } else {
        throw SolverError("lp_relaxation: size limit reached before full row separation (" +
                          std::to_string(lazy.simplex().num_active_rows()) + " active rows)");
    }
    sol.solve_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sol;
}

MilpSolution solve_milp(const MilpModel& model, const SolveOptions& options) {
    model.validate();
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&]() {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    MilpSolution sol;
    const ReducedModel rm = detail::reduce_model(model);
    if (rm.proven_infeasible) {
        sol.status = SolveStatus::infeasible;
        sol.solve_seconds = elapsed();
        return sol;
    }

    LazyLp lazy(rm, kMaxActiveRows);
    SimplexSolver& spx = lazy.simplex();
    std::int64_t extra_iterations = 0;

    // Incumbent state (objective includes the model constant).
    bool have_incumbent = false;
    std::vector<double> inc_x;
    double inc_obj = kInf;

    auto try_incumbent = [&](const std::vector<double>& binary_values) {
        RepairOutcome rep = evaluate_with_fixed_binaries(rm, binary_values);
        extra_iterations += rep.iterations;
        if (rep.feasible && rep.objective < inc_obj - 1e-12) {
            have_incumbent = true;
            inc_obj = rep.objective;
            inc_x = std::move(rep.full_x);
        }
        return rep.feasible;
    };

    auto dive = [&](const std::vector<double>& x_frac) {
        auto vals = rounded_binaries(rm, x_frac, spx);
        repair_binary_rows(rm, x_frac, vals, spx);
        try_incumbent(vals);
    };

    // Node arena + best-first heap keyed by (bound, insertion sequence).
    std::vector<BnbNode> arena;
    using HeapEntry = std::tuple<double, std::int64_t, int>;
    std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<>> heap;
    std::int64_t next_seq = 0;

    arena.push_back(BnbNode{});
    heap.emplace(-kInf, next_seq++, 0);

    auto apply_node_bounds = [&](int idx) {
        for (int b : rm.binaries) spx.set_var_bounds(b, rm.lp.lower[b], rm.lp.upper[b]);
        for (int cur = idx; cur > 0; cur = arena[cur].parent)
            spx.set_var_bounds(arena[cur].fix_var, arena[cur].fix_val, arena[cur].fix_val);
    };

    auto prune_threshold = [&]() {
        if (!have_incumbent) return kInf;
        return inc_obj - std::max(options.gap_tol * std::max(1.0, std::abs(inc_obj)), 1e-9);
    };

    // Minimum valid lower bound over subtrees not explored to completion
    // (pruned against the incumbent, dropped, or left in the heap at a
    // limit exit). The final global bound is min(incumbent, this).
    double min_unresolved = kInf;
    std::int64_t nodes_processed = 0;
    bool hit_limit = false;
    bool unbounded_somewhere = false;

    while (!heap.empty() && !unbounded_somewhere) {
        const auto [pop_bound, pop_seq, idx] = heap.top();

        if (elapsed() > options.time_limit_s || nodes_processed >= options.node_limit) {
            hit_limit = true;
            min_unresolved = std::min(min_unresolved, pop_bound);
            break;
        }
        heap.pop();
        if (pop_bound >= prune_threshold()) {
            // Best-first order: every remaining node is at least as bad.
            min_unresolved = std::min(min_unresolved, pop_bound);
            break;
        }
        ++nodes_processed;

        apply_node_bounds(idx);

        double node_bound = arena[idx].bound;
        bool node_done = false;
        for (int attempt = 0; attempt < 200 && !node_done; ++attempt) {
            const LazyResult res = lazy.solve(50);
            if (res.status == LpStatus::infeasible) {
                node_done = true;
                break;
            }
            if (res.status == LpStatus::unbounded) {
                // Binaries are bounded, so an unbounded ray is purely
                // continuous and applies to every node: the MILP itself is
                // unbounded (or infeasible; the relaxed status is reported).
                unbounded_somewhere = true;
                node_done = true;
                break;
            }
            if (res.status == LpStatus::stalled) {
                // Keep the inherited bound; branch on the lowest unfixed
                // binary to make progress.
                int branch_var = -1;
                for (int b : rm.binaries)
                    if (spx.var_upper(b) - spx.var_lower(b) > 0.5) {
                        branch_var = b;
                        break;
                    }
                if (branch_var < 0)
                    throw SolverError("milp: simplex stalled on a fully fixed node");
                for (int v = 0; v <= 1; ++v) {
                    arena.push_back(BnbNode{idx, branch_var, static_cast<std::uint8_t>(v),
                                            node_bound, next_seq});
                    heap.emplace(node_bound, next_seq, static_cast<int>(arena.size()) - 1);
                    ++next_seq;
                }
                node_done = true;
                break;
            }

            node_bound = std::max(node_bound, res.objective + rm.objective_shift);
            if (node_bound >= prune_threshold()) {
                min_unresolved = std::min(min_unresolved, node_bound);
                node_done = true;
                break;
            }

            const auto x = spx.solution();
            int branch_var = -1;
            double branch_frac = kIntegralityTol;
            for (int b : rm.binaries) {
                const double frac = std::abs(x[b] - std::round(x[b]));
                if (frac > branch_frac) {
                    branch_frac = frac;
                    branch_var = b;
                }
            }

            if (branch_var < 0) {
                // Integral LP solution: evaluate as incumbent. When the
                // point fails the full-model check (rows missed by lazy
                // separation), activate what it violates and re-solve.
                const auto vals = rounded_binaries(rm, x, spx);
                if (try_incumbent(vals)) {
                    node_done = true;
                    break;
                }
                auto viol = lazy.violated_rows(x, 1e-9);
                if (viol.empty()) {
                    // Repair failed for numerical reasons; the branch set is
                    // integral, so give the node up but keep its (valid)
                    // bound in the global accounting.
                    min_unresolved = std::min(min_unresolved, node_bound);
                    node_done = true;
                    break;
                }
                if (static_cast<int>(viol.size()) > kAddPerRound) viol.resize(kAddPerRound);
                spx.activate_rows(viol);
                continue;
            }

            // Periodic dive for incumbents.
            if (idx == 0 || (nodes_processed & 63) == 0) dive(x);
            if (idx == 0 && !have_incumbent) {
                // Last-resort: push every free binary toward its lower bound.
                std::vector<double> vals(rm.binaries.size());
                for (std::size_t i = 0; i < rm.binaries.size(); ++i)
                    vals[i] = spx.var_lower(rm.binaries[i]);
                try_incumbent(vals);
            }

            for (int v = 0; v <= 1; ++v) {
                arena.push_back(
                    BnbNode{idx, branch_var, static_cast<std::uint8_t>(v), node_bound, next_seq});
                heap.emplace(node_bound, next_seq, static_cast<int>(arena.size()) - 1);
                ++next_seq;
            }
            node_done = true;
        }
        if (!node_done)
            throw SolverError("milp: node loop failed to converge (separation thrashing)");
    }

    sol.nodes = nodes_processed;
    sol.lp_iterations = spx.iterations() + extra_iterations;
    sol.solve_seconds = elapsed();

    if (unbounded_somewhere) {
        sol.status = SolveStatus::unbounded;
        sol.best_bound = -kInf;
        return sol;
    }
    if (!have_incumbent) {
        if (hit_limit) {
            sol.status = SolveStatus::feasible_time_limit;
            sol.best_bound = min_unresolved;
            return sol;
        }
        // Tree exhausted without a feasible point anywhere.
        sol.status = SolveStatus::infeasible;
        return sol;
    }

    sol.values = inc_x;
    sol.objective_value = inc_obj;
    sol.best_bound = std::min(min_unresolved, inc_obj);
    sol.gap = (inc_obj - sol.best_bound) / std::max(1.0, std::abs(inc_obj));
    // A natural termination proves the gap by construction of the pruning
    // threshold; anything else keeps the limit status.
    sol.status = sol.gap <= options.gap_tol ? SolveStatus::optimal
                                            : SolveStatus::feasible_time_limit;
    return sol;
}

// ---------------------------------------------------------------------------
// Debug dump

void dump_lp(const MilpModel& model, std::ostream& out) {
    out << "minimize\n ";
    bool first = true;
    for (int v = 0; v < model.num_vars(); ++v) {
        const double c = model.objective[v];
        if (c == 0.0) continue;
        if (!first || c < 0.0) out << (c < 0.0 ? " - " : " + ");
        out << std::abs(c) << " " << model.variables[v].name;
        first = false;
    }
    if (model.objective_constant != 0.0)
        out << (model.objective_constant < 0.0 ? " - " : " + ")
            << std::abs(model.objective_constant);
    if (first && model.objective_constant == 0.0) out << "0";
    out << "\nsubject to\n";
    for (std::size_t r = 0; r < model.constraints.size(); ++r) {
        const auto& c = model.constraints[r];
        out << " r" << r << ": ";
        bool f = true;
        for (const auto& t : c.terms) {
            if (!f || t.coef < 0.0) out << (t.coef < 0.0 ? " - " : " + ");
            out << std::abs(t.coef) << " " << model.variables[t.var].name;
            f = false;
        }
        if (f) out << "0";
        out << (c.rel == Relation::le ? " <= " : c.rel == Relation::ge ? " >= " : " = ");
        out << c.rhs << "\n";
    }
    out << "bounds\n";
    for (const auto& v : model.variables)
        out << " " << v.lower << " <= " << v.name << " <= " << v.upper << "\n";
    out << "binaries\n";
    for (const auto& v : model.variables)
        if (v.kind == VarKind::binary) out << " " << v.name << "\n";
    out << "end\n";
}

} // namespace ngdr
