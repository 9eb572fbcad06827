#include "simplex.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "ngdr/errors.hpp"

namespace ngdr::detail {

namespace {
constexpr double kFeasTol = 1e-9;   // internal primal feasibility
constexpr double kDualTol = 1e-9;   // reduced-cost optimality
constexpr double kPivotTol = 1e-9;  // smallest acceptable pivot element
constexpr double kZeroTol = 1e-12;
} // namespace

SimplexSolver::SimplexSolver(const LpProblem& problem) : prob_(problem) {
    nstruct_ = prob_.num_vars();
    const int nrows = prob_.num_rows();
    lb_.resize(nstruct_ + nrows);
    ub_.resize(nstruct_ + nrows);
    x_.assign(nstruct_ + nrows, 0.0);
    status_.assign(nstruct_ + nrows, VStatus::free_nb);
    basic_pos_.assign(nstruct_ + nrows, -1);
    row_pos_.assign(nrows, -1);
    cols_.resize(nstruct_);

    for (int j = 0; j < nstruct_; ++j) {
        lb_[j] = prob_.lower[j];
        ub_[j] = prob_.upper[j];
        if (std::isfinite(lb_[j]) && (!std::isfinite(ub_[j]) || std::abs(lb_[j]) <= std::abs(ub_[j]))) {
            status_[j] = VStatus::at_lower;
            x_[j] = lb_[j];
        } else if (std::isfinite(ub_[j])) {
            status_[j] = VStatus::at_upper;
            x_[j] = ub_[j];
        } else {
            status_[j] = VStatus::free_nb;
            x_[j] = 0.0;
        }
    }
    for (int r = 0; r < nrows; ++r) {
        lb_[nstruct_ + r] = prob_.rows[r].lo;
        ub_[nstruct_ + r] = prob_.rows[r].hi;
    }
}

void SimplexSolver::activate_rows(const std::vector<int>& global_rows) {
    std::vector<int> fresh;
    fresh.reserve(global_rows.size());
    for (int r : global_rows)
        if (row_pos_[r] < 0) fresh.push_back(r);
    if (fresh.empty()) return;

    const int m_old = m();
    const int k = static_cast<int>(fresh.size());
    const int m_new = m_old + k;

    // Border update: new logicals enter the basis, so
    //   B_new = [[B, 0], [C, -I]]  =>  B_new^{-1} = [[B^{-1}, 0], [C B^{-1}, -I]]
    // where C holds the new rows' coefficients on the currently basic vars.
    std::vector<double> nb(static_cast<std::size_t>(m_new) * m_new, 0.0);
    for (int p = 0; p < m_old; ++p) {
        const double* src = binv_.data() + static_cast<std::size_t>(p) * m_old;
        double* dst = nb.data() + static_cast<std::size_t>(p) * m_new;
        std::copy(src, src + m_old, dst);
    }
    for (int j = 0; j < k; ++j) {
        const auto& row = prob_.rows[fresh[j]];
        // sparse C_j over basic positions
        std::vector<std::pair<int, double>> cj;
        for (const auto& term : row.terms) {
            const int bp = basic_pos_[term.var];
            if (bp >= 0) cj.emplace_back(bp, term.coef);
        }
        for (int p = 0; p < m_old; ++p) {
            const double* oldcol = binv_.data() + static_cast<std::size_t>(p) * m_old;
            double acc = 0.0;
            for (const auto& [bp, a] : cj) acc += a * oldcol[bp];
            nb[static_cast<std::size_t>(p) * m_new + m_old + j] = acc;
        }
        nb[static_cast<std::size_t>(m_old + j) * m_new + m_old + j] = -1.0;
    }
    binv_.swap(nb);

    for (int j = 0; j < k; ++j) {
        const int r = fresh[j];
        const int pos = m_old + j;
        row_pos_[r] = pos;
        active_rows_.push_back(r);
        const int logical = nstruct_ + r;
        basis_.push_back(logical);
        basic_pos_[logical] = pos;
        status_[logical] = VStatus::basic;
        double activity = 0.0;
        for (const auto& term : prob_.rows[r].terms) {
            activity += term.coef * x_[term.var];
            cols_[term.var].emplace_back(pos, term.coef);
        }
        x_[logical] = activity;
    }
}

void SimplexSolver::set_var_bounds(int var, double lo, double hi) {
    lb_[var] = lo;
    ub_[var] = hi;
    if (status_[var] == VStatus::basic) return;
    update_nonbasic_value(var);
}

void SimplexSolver::update_nonbasic_value(int var) {
    if (status_[var] == VStatus::at_lower) {
        if (std::isfinite(lb_[var])) {
            x_[var] = lb_[var];
        } else if (std::isfinite(ub_[var])) {
            status_[var] = VStatus::at_upper;
            x_[var] = ub_[var];
        } else {
            status_[var] = VStatus::free_nb;
            x_[var] = 0.0;
        }
    } else if (status_[var] == VStatus::at_upper) {
        if (std::isfinite(ub_[var])) {
            x_[var] = ub_[var];
        } else if (std::isfinite(lb_[var])) {
            status_[var] = VStatus::at_lower;
            x_[var] = lb_[var];
        } else {
            status_[var] = VStatus::free_nb;
            x_[var] = 0.0;
        }
    }
}

void SimplexSolver::ftran_column(int var, std::vector<double>& t) const {
    const int mm = m();
    t.assign(mm, 0.0);
    if (var >= nstruct_) {
        const int pos = row_pos_[var - nstruct_];
        assert(pos >= 0);
        const double* col = binv_.data() + static_cast<std::size_t>(pos) * mm;
        for (int i = 0; i < mm; ++i) t[i] = -col[i];
        return;
    }
    for (const auto& [pos, a] : cols_[var]) {
        const double* col = binv_.data() + static_cast<std::size_t>(pos) * mm;
        for (int i = 0; i < mm; ++i) t[i] += a * col[i];
    }
}

void SimplexSolver::compute_duals(const std::vector<double>& cb, std::vector<double>& y) const {
    const int mm = m();
    y.assign(mm, 0.0);
    for (int p = 0; p < mm; ++p) {
        const double* col = binv_.data() + static_cast<std::size_t>(p) * mm;
        double acc = 0.0;
        for (int i = 0; i < mm; ++i) acc += cb[i] * col[i];
        y[p] = acc;
    }
}

void SimplexSolver::compute_reduced_costs(const std::vector<double>& y,
                                          const std::vector<double>& cn_struct,
                                          std::vector<double>& d) const {
    // d_j = c_j - y'col(j); logical columns are -e_p so d_logical = +y_p.
    d.assign(nstruct_ + static_cast<int>(row_pos_.size()), 0.0);
    for (int j = 0; j < nstruct_; ++j) d[j] = cn_struct[j];
    const int mm = m();
    for (int p = 0; p < mm; ++p) {
        const double yp = y[p];
        if (yp == 0.0) continue;
        const auto& row = prob_.rows[active_rows_[p]];
        for (const auto& term : row.terms) d[term.var] -= yp * term.coef;
    }
    for (int p = 0; p < mm; ++p) d[nstruct_ + active_rows_[p]] = y[p];
}

void SimplexSolver::refresh_basic_values() {
    const int mm = m();
    if (mm == 0) return;
    // x_B = -B^{-1} * sum_{nonbasic v} col(v) * x_v   (all row rhs are 0)
    std::vector<double> w(mm, 0.0);
    for (int j = 0; j < nstruct_; ++j) {
        if (status_[j] == VStatus::basic || x_[j] == 0.0) continue;
        for (const auto& [pos, a] : cols_[j]) w[pos] += a * x_[j];
    }
    for (int p = 0; p < mm; ++p) {
        const int logical = nstruct_ + active_rows_[p];
        if (status_[logical] != VStatus::basic && x_[logical] != 0.0) w[p] -= x_[logical];
    }
    std::vector<double> xb(mm, 0.0);
    for (int p = 0; p < mm; ++p) {
        if (w[p] == 0.0) continue;
        const double* col = binv_.data() + static_cast<std::size_t>(p) * mm;
        for (int i = 0; i < mm; ++i) xb[i] -= w[p] * col[i];
    }
    for (int i = 0; i < mm; ++i) x_[basis_[i]] = xb[i];
}

void SimplexSolver::refactorize() {
    const int mm = m();
    if (mm == 0) return;
    // Dense Gauss-Jordan inversion of the basis matrix with partial pivoting.
    std::vector<double> a(static_cast<std::size_t>(mm) * 2 * mm, 0.0);
    auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * 2 * mm + j]; };
    for (int p = 0; p < mm; ++p) {
        const int v = basis_[p];
        if (v >= nstruct_) {
            at(row_pos_[v - nstruct_], p) = -1.0;
        } else {
            for (const auto& [pos, coef] : cols_[v]) at(pos, p) = coef;
        }
        at(p, mm + p) = 1.0;
    }
    for (int c = 0; c < mm; ++c) {
        int piv = c;
        double best = std::abs(at(c, c));
        for (int i = c + 1; i < mm; ++i) {
            const double v = std::abs(at(i, c));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best < 1e-11)
            throw SolverError("simplex: numerically singular basis (refactorization pivot " +
                              std::to_string(best) + " at column " + std::to_string(c) + ")");
        if (piv != c)
            for (int j = 0; j < 2 * mm; ++j) std::swap(at(c, j), at(piv, j));
        const double inv = 1.0 / at(c, c);
        for (int j = 0; j < 2 * mm; ++j) at(c, j) *= inv;
        for (int i = 0; i < mm; ++i) {
            if (i == c) continue;
            const double f = at(i, c);
            if (f == 0.0) continue;
            for (int j = 0; j < 2 * mm; ++j) at(i, j) -= f * at(c, j);
        }
    }
    for (int p = 0; p < mm; ++p)
        for (int i = 0; i < mm; ++i) binv_[static_cast<std::size_t>(p) * mm + i] = at(i, mm + p);
}

double SimplexSolver::infeasibility() const {
    double total = 0.0;
    for (int i = 0; i < m(); ++i) {
        const int v = basis_[i];
        if (x_[v] < lb_[v]) total += lb_[v] - x_[v];
        if (x_[v] > ub_[v]) total += x_[v] - ub_[v];
    }
    return total;
}

void SimplexSolver::pivot(int entering, int leaving_pos, const std::vector<double>& t) {
    const int mm = m();
    const int leaving = basis_[leaving_pos];
    const double tr = t[leaving_pos];
    for (int p = 0; p < mm; ++p) {
        double* col = binv_.data() + static_cast<std::size_t>(p) * mm;
        const double pivot_val = col[leaving_pos] / tr;
        col[leaving_pos] = pivot_val;
        if (pivot_val != 0.0) {
            for (int i = 0; i < mm; ++i) {
                if (i != leaving_pos) col[i] -= t[i] * pivot_val;
            }
        }
    }
    basis_[leaving_pos] = entering;
    basic_pos_[entering] = leaving_pos;
    basic_pos_[leaving] = -1;
    status_[entering] = VStatus::basic;
}

bool SimplexSolver::iterate(bool phase1, bool bland, bool& unbounded, int& unbounded_var,
                            int& unbounded_dir, double& step_taken, std::vector<double>& t_out) {
    const int mm = m();
    unbounded = false;
    step_taken = 0.0;

    // Costs: structural objective in phase 2; composite infeasibility costs
    // in phase 1 (nonzero only on infeasible basics).
    std::vector<double> cb(mm, 0.0);
    std::vector<double> cn(nstruct_, 0.0);
    if (phase1) {
        for (int i = 0; i < mm; ++i) {
            const int v = basis_[i];
            if (x_[v] < lb_[v] - kFeasTol)
                cb[i] = -1.0;
            else if (x_[v] > ub_[v] + kFeasTol)
                cb[i] = 1.0;
        }
    } else {
        for (int i = 0; i < mm; ++i)
            if (basis_[i] < nstruct_) cb[i] = prob_.cost[basis_[i]];
        for (int j = 0; j < nstruct_; ++j) cn[j] = prob_.cost[j];
    }

    std::vector<double> y, d;
    compute_duals(cb, y);
    compute_reduced_costs(y, cn, d);

    // Entering variable: Dantzig (largest eligible |d|), ties by lowest
    // variable id; Bland mode picks the lowest eligible id outright.
    int entering = -1;
    int dir = 0;
    double best_score = kDualTol;
    auto consider = [&](int v) {
        if (status_[v] == VStatus::basic) return;
        if (ub_[v] - lb_[v] < kZeroTol && status_[v] != VStatus::free_nb) return; // fixed
        double score = 0.0;
        int sigma = 0;
        if (status_[v] == VStatus::at_lower) {
            if (d[v] < -kDualTol) {
                score = -d[v];
                sigma = +1;
            }
        } else if (status_[v] == VStatus::at_upper) {
            if (d[v] > kDualTol) {
                score = d[v];
                sigma = -1;
            }
        } else { // free at zero
            if (std::abs(d[v]) > kDualTol) {
                score = std::abs(d[v]);
                sigma = d[v] < 0.0 ? +1 : -1;
            }
        }
        if (sigma == 0) return;
        if (score > best_score || (score == best_score && (entering < 0 || v < entering))) {
            best_score = score;
            entering = v;
            dir = sigma;
        }
    };
    if (bland) {
        // Lowest eligible variable id in the fixed total order: structural
        // ids first, then logicals by global row id.
        for (int j = 0; j < nstruct_ && entering < 0; ++j) consider(j);
        if (entering < 0) {
            const int nrows = static_cast<int>(row_pos_.size());
            for (int r = 0; r < nrows && entering < 0; ++r)
                if (row_pos_[r] >= 0) consider(nstruct_ + r);
        }
    } else {
        for (int j = 0; j < nstruct_; ++j) consider(j);
        for (int p = 0; p < mm; ++p) consider(nstruct_ + active_rows_[p]);
    }
    if (entering < 0) return false; // phase optimal

    std::vector<double>& t = t_out;
    ftran_column(entering, t);

    // Ratio test: basic i changes at rate delta_i = -dir * t_i.
    const double flip_range = ub_[entering] - lb_[entering]; // may be inf
    double best_ratio = kInf;
    int leaving_pos = -1;
    int leaving_var = -1;
    double leaving_target = 0.0;
    for (int i = 0; i < mm; ++i) {
        if (std::abs(t[i]) < kPivotTol) continue;
        const int v = basis_[i];
        const double delta = -dir * t[i];
        double bound = kInf;
        bool toward_upper = false;
        if (phase1 && x_[v] < lb_[v] - kFeasTol) {
            if (delta > 0.0) {
                bound = lb_[v];
                toward_upper = true; // rising to its lower bound
            }
        } else if (phase1 && x_[v] > ub_[v] + kFeasTol) {
            if (delta < 0.0) {
                bound = ub_[v];
            }
        } else {
            if (delta > 0.0 && std::isfinite(ub_[v])) {
                bound = ub_[v];
                toward_upper = true;
            } else if (delta < 0.0 && std::isfinite(lb_[v])) {
                bound = lb_[v];
            }
        }
        if (!std::isfinite(bound)) continue;
        double ratio = (bound - x_[v]) / delta;
        if (ratio < 0.0) ratio = 0.0; // drift past the bound: degenerate block
        if (ratio < best_ratio - kZeroTol ||
            (ratio < best_ratio + kZeroTol && (leaving_var < 0 || v < leaving_var))) {
            best_ratio = ratio;
            leaving_pos = i;
            leaving_var = v;
            leaving_target = bound;
            (void)toward_upper;
        }
    }

    if (std::isfinite(flip_range) && flip_range < best_ratio - kZeroTol) {
        // Bound flip: entering moves to its opposite bound, basis unchanged.
        const double step = flip_range;
        step_taken = step;
        for (int i = 0; i < mm; ++i)
            if (t[i] != 0.0) x_[basis_[i]] += -dir * t[i] * step;
        if (dir > 0) {
            x_[entering] = ub_[entering];
            status_[entering] = VStatus::at_upper;
        } else {
            x_[entering] = lb_[entering];
            status_[entering] = VStatus::at_lower;
        }
        return true;
    }

    if (leaving_pos < 0) {
        unbounded = true;
        unbounded_var = entering;
        unbounded_dir = dir;
        return true;
    }

    const double step = best_ratio;
    step_taken = step;
    for (int i = 0; i < mm; ++i)
        if (t[i] != 0.0) x_[basis_[i]] += -dir * t[i] * step;
    x_[entering] = x_[entering] + dir * step;
    x_[leaving_var] = leaving_target; // snap to kill accumulated drift
    status_[leaving_var] =
        (leaving_target == ub_[leaving_var] && std::isfinite(ub_[leaving_var]) &&
         !(lb_[leaving_var] == ub_[leaving_var]))
            ? VStatus::at_upper
            : VStatus::at_lower;
    if (!std::isfinite(lb_[leaving_var]) && !std::isfinite(ub_[leaving_var]))
        status_[leaving_var] = VStatus::free_nb;
    pivot(entering, leaving_pos, t);
    return true;
}

LpStatus SimplexSolver::solve() {
    const int mm = m();
    refresh_basic_values();

    const std::int64_t iter_cap = 20000 + 60LL * (mm + nstruct_);
    std::int64_t iters = 0;
    std::int64_t degen_run = 0;
    bool bland = false;
    int refactor_retries = 0;
    std::vector<double> t;

    enum class Phase { one, two };
    Phase phase = infeasibility() > kFeasTol ? Phase::one : Phase::two;

    while (true) {
        if (iters >= iter_cap) {
            if (refactor_retries < 1) {
                ++refactor_retries;
                refactorize();
                refresh_basic_values();
                bland = true;
                iters = 0;
                continue;
            }
            return LpStatus::stalled;
        }

        if (phase == Phase::one && infeasibility() <= kFeasTol) phase = Phase::two;

        bool unbounded = false;
        int ub_var = -1, ub_dir = 0;
        double step = 0.0;
        const bool moved = iterate(phase == Phase::one, bland, unbounded, ub_var, ub_dir, step, t);
        ++iters;
        ++total_iterations_;

        if (!moved) {
            if (phase == Phase::one) {
                refresh_basic_values();
                if (infeasibility() > kFeasTol) return LpStatus::infeasible;
                phase = Phase::two;
                continue;
            }
            refresh_basic_values();
            if (infeasibility() > 1e-7) {
                // Accumulated drift: refactorize once and re-run.
                if (refactor_retries < 2) {
                    ++refactor_retries;
                    refactorize();
                    refresh_basic_values();
                    phase = Phase::one;
                    continue;
                }
                return LpStatus::stalled;
            }
            return LpStatus::optimal;
        }

        if (unbounded) {
            if (phase == Phase::one) {
                // A bounded-below phase-1 objective cannot be unbounded;
                // treat as numerical trouble.
                if (refactor_retries < 2) {
                    ++refactor_retries;
                    refactorize();
                    refresh_basic_values();
                    continue;
                }
                return LpStatus::stalled;
            }
            // Record the ray in structural space for ray separation.
            ray_.assign(nstruct_, 0.0);
            ftran_column(ub_var, t);
            if (ub_var < nstruct_) ray_[ub_var] = ub_dir;
            for (int i = 0; i < m(); ++i) {
                const int v = basis_[i];
                if (v < nstruct_ && std::abs(t[i]) > kZeroTol) ray_[v] = -ub_dir * t[i];
            }
            return LpStatus::unbounded;
        }

        // Fall back to Bland's rule after a long run of degenerate pivots;
        // a genuine step resets the counter and restores Dantzig pricing.
        if (step > 1e-10) {
            degen_run = 0;
            bland = false;
        } else if (!bland) {
            ++degen_run;
            if (degen_run > 500 + 2LL * mm) bland = true;
        }
        if ((iters & 0xFF) == 0) refresh_basic_values();
    }
}

double SimplexSolver::objective() const {
    double obj = 0.0;
    for (int j = 0; j < nstruct_; ++j) obj += prob_.cost[j] * x_[j];
    return obj;
}

std::vector<double> SimplexSolver::solution() const {
    return std::vector<double>(x_.begin(), x_.begin() + nstruct_);
}

} // namespace ngdr::detail
