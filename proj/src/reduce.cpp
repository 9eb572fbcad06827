#include "reduce.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ngdr/errors.hpp"

namespace ngdr::detail {

namespace {

constexpr double kElimPivotTol = 1e-7;

// Affine expression over not-eliminated variables: c0 + sum coef*var.
struct Expr {
    double c0 = 0.0;
    std::map<int, double> terms;
};

// Interval of a linear form given variable bounds (used to drop rows that
// can never bind).
struct Interval {
    double lo = 0.0, hi = 0.0;
};

Interval activity_interval(const std::vector<LinearTerm>& terms, const MilpModel& model) {
    Interval iv;
    for (const auto& t : terms) {
        const double l = model.variables[t.var].lower;
        const double u = model.variables[t.var].upper;
        const double a = t.coef * (t.coef >= 0.0 ? l : u);
        const double b = t.coef * (t.coef >= 0.0 ? u : l);
        iv.lo += a;
        iv.hi += b;
    }
    return iv;
}

} // namespace

ReducedModel reduce_model(const MilpModel& model) {
    ReducedModel rm;
    rm.model = &model;
    const int nvars = model.num_vars();
    const int nrows = static_cast<int>(model.constraints.size());

    std::vector<std::optional<Expr>> expr(nvars); // set when eliminated
    std::vector<bool> row_consumed(nrows, false);

    // Substitute already-eliminated variables into a row, producing an
    // affine form over surviving variables.
    auto expand_row = [&](const Constraint& c) {
        Expr e;
        for (const auto& t : c.terms) {
            if (expr[t.var]) {
                e.c0 += t.coef * expr[t.var]->c0;
                for (const auto& [v, a] : expr[t.var]->terms) e.terms[v] += t.coef * a;
            } else {
                e.terms[t.var] += t.coef;
            }
        }
        return e;
    };

    // Repeated passes in row order: an equality row defines a continuous
    // variable when every other surviving variable in it is binary. The
    // candidate with the largest pivot (ties by lowest index) is chosen.
    bool changed = true;
    while (changed) {
        changed = false;
        for (int r = 0; r < nrows; ++r) {
            if (row_consumed[r] || model.constraints[r].rel != Relation::eq) continue;
            Expr e = expand_row(model.constraints[r]);
            int best_var = -1;
            double best_coef = 0.0;
            for (const auto& [v, a] : e.terms) {
                if (model.variables[v].kind != VarKind::continuous) continue;
                if (std::abs(a) < kElimPivotTol) continue;
                if (best_var < 0 || std::abs(a) > std::abs(best_coef)) {
                    best_var = v;
                    best_coef = a;
                }
            }
            if (best_var < 0) continue;
            bool sole_continuous = true;
            for (const auto& [v, a] : e.terms) {
                if (v == best_var) continue;
                if (model.variables[v].kind == VarKind::continuous && std::abs(a) > 0.0) {
                    sole_continuous = false;
                    break;
                }
            }
            if (!sole_continuous) continue;

            Expr def;
            def.c0 = (model.constraints[r].rhs - e.c0) / best_coef;
            for (const auto& [v, a] : e.terms) {
                if (v == best_var) continue;
                if (a != 0.0) def.terms[v] = -a / best_coef;
            }
            expr[best_var] = std::move(def);
            row_consumed[r] = true;
            rm.eliminations.push_back({best_var, r});
            changed = true;
        }
    }

    // Kept-variable index mapping.
    rm.orig_to_red.assign(nvars, -1);
    for (int v = 0; v < nvars; ++v) {
        if (!expr[v]) {
            rm.orig_to_red[v] = static_cast<int>(rm.red_to_orig.size());
            rm.red_to_orig.push_back(v);
        }
    }
    const int nred = static_cast<int>(rm.red_to_orig.size());
    rm.lp.lower.resize(nred);
    rm.lp.upper.resize(nred);
    rm.lp.cost.assign(nred, 0.0);
    for (int j = 0; j < nred; ++j) {
        const auto& var = model.variables[rm.red_to_orig[j]];
        rm.lp.lower[j] = var.lower;
        rm.lp.upper[j] = var.upper;
        if (var.kind == VarKind::binary) rm.binaries.push_back(j);
    }

    // Objective with eliminated variables substituted.
    rm.objective_shift = model.objective_constant;
    for (int v = 0; v < nvars; ++v) {
        const double c = model.objective[v];
        if (c == 0.0) continue;
        if (expr[v]) {
            rm.objective_shift += c * expr[v]->c0;
            for (const auto& [w, a] : expr[v]->terms) rm.lp.cost[rm.orig_to_red[w]] += c * a;
        } else {
            rm.lp.cost[rm.orig_to_red[v]] += c;
        }
    }

    auto push_row = [&](const Expr& e, double lo, double hi) {
        LpProblem::Row row;
        row.lo = lo;
        row.hi = hi;
        for (const auto& [v, a] : e.terms)
            if (a != 0.0) row.terms.push_back({rm.orig_to_red[v], a});
        if (row.terms.empty()) {
            if (e.c0 < lo - ngdr::kFeasibilityTol || e.c0 > hi + ngdr::kFeasibilityTol)
                rm.proven_infeasible = true;
            return;
        }
        // Shift the constant into the range; drop rows that can never bind.
        row.lo = std::isfinite(lo) ? lo - e.c0 : -kInf;
        row.hi = std::isfinite(hi) ? hi - e.c0 : kInf;
        std::vector<LinearTerm> orig_terms;
        for (const auto& [v, a] : e.terms)
            if (a != 0.0) orig_terms.push_back({v, a});
        const Interval iv = activity_interval(orig_terms, model);
        const bool lo_redundant = !std::isfinite(row.lo) || iv.lo >= row.lo - 1e-11;
        const bool hi_redundant = !std::isfinite(row.hi) || iv.hi <= row.hi + 1e-11;
        if (lo_redundant && hi_redundant) return;
        rm.lp.rows.push_back(std::move(row));
    };

    // Remaining constraints with substitutions applied.
    for (int r = 0; r < nrows; ++r) {
        if (row_consumed[r]) continue;
        const auto& c = model.constraints[r];
        const Expr e = expand_row(c);
        double lo = -kInf, hi = kInf;
        if (c.rel == Relation::le) hi = c.rhs;
        if (c.rel == Relation::ge) lo = c.rhs;
        if (c.rel == Relation::eq) lo = hi = c.rhs;
        push_row(e, lo, hi);
    }

    // Bounds of eliminated variables become rows over their definitions.
    for (const auto& el : rm.eliminations) {
        const auto& var = model.variables[el.orig_var];
        if (!std::isfinite(var.lower) && !std::isfinite(var.upper)) continue;
        push_row(*expr[el.orig_var], var.lower, var.upper);
    }

    return rm;
}

std::vector<double> ReducedModel::reconstruct(const std::vector<double>& reduced_x) const {
    std::vector<double> full(model->num_vars(), 0.0);
    for (std::size_t j = 0; j < red_to_orig.size(); ++j) full[red_to_orig[j]] = reduced_x[j];
    // Forward substitution through the consumed equality rows, in
    // elimination order, using the rows' own arithmetic.
    for (const auto& el : eliminations) {
        const auto& row = model->constraints[el.orig_row];
        double pivot_coef = 0.0;
        double rest = 0.0;
        for (const auto& t : row.terms) {
            if (t.var == el.orig_var)
                pivot_coef += t.coef;
            else
                rest += t.coef * full[t.var];
        }
        full[el.orig_var] = (row.rhs - rest) / pivot_coef;
    }
    return full;
}

double ReducedModel::max_violation(const std::vector<double>& full_x) const {
    double worst = 0.0;
    for (int v = 0; v < model->num_vars(); ++v) {
        const auto& var = model->variables[v];
        if (std::isfinite(var.lower)) worst = std::max(worst, var.lower - full_x[v]);
        if (std::isfinite(var.upper)) worst = std::max(worst, full_x[v] - var.upper);
    }
    for (const auto& c : model->constraints) {
        double act = 0.0;
        for (const auto& t : c.terms) act += t.coef * full_x[t.var];
        if (c.rel == Relation::le || c.rel == Relation::eq) worst = std::max(worst, act - c.rhs);
        if (c.rel == Relation::ge || c.rel == Relation::eq) worst = std::max(worst, c.rhs - act);
    }
    return worst;
}

double ReducedModel::original_objective(const std::vector<double>& full_x) const {
    double obj = model->objective_constant;
    for (int v = 0; v < model->num_vars(); ++v) obj += model->objective[v] * full_x[v];
    return obj;
}

} // namespace ngdr::detail
