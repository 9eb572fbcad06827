#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

#include "ngdr/errors.hpp"
#include "ngdr/milp.hpp"
#include "support/rng.hpp"

using namespace ngdr;

namespace {

// Brute-force LP oracle for small models with finite variable bounds:
// enumerates every choice of n active hyperplanes (constraint boundaries
// and variable bounds), solves the linear system, filters by feasibility,
// and minimizes. A bounded nonempty polytope always has an optimal vertex.
std::optional<double> brute_lp(const MilpModel& m) {
    const int n = m.num_vars();
    struct Plane {
        std::vector<double> a;
        double rhs;
    };
    std::vector<Plane> planes;
    for (const auto& c : m.constraints) {
        Plane p{std::vector<double>(n, 0.0), c.rhs};
        for (const auto& t : c.terms) p.a[t.var] += t.coef;
        planes.push_back(p);
    }
    for (int j = 0; j < n; ++j) {
        Plane lo{std::vector<double>(n, 0.0), m.variables[j].lower};
        lo.a[j] = 1.0;
        planes.push_back(lo);
        Plane hi{std::vector<double>(n, 0.0), m.variables[j].upper};
        hi.a[j] = 1.0;
        planes.push_back(hi);
    }

    auto feasible = [&](const std::vector<double>& x) {
        for (int j = 0; j < n; ++j)
            if (x[j] < m.variables[j].lower - 1e-7 || x[j] > m.variables[j].upper + 1e-7)
                return false;
        for (const auto& c : m.constraints) {
            double act = 0.0;
            for (const auto& t : c.terms) act += t.coef * x[t.var];
            if (c.rel == Relation::le && act > c.rhs + 1e-7) return false;
            if (c.rel == Relation::ge && act < c.rhs - 1e-7) return false;
            if (c.rel == Relation::eq && std::abs(act - c.rhs) > 1e-7) return false;
        }
        return true;
    };

    std::optional<double> best;
    std::vector<int> pick(n);
    const int np = static_cast<int>(planes.size());
    // Iterate all n-subsets of planes.
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    auto advance = [&]() {
        int i = n - 1;
        while (i >= 0 && idx[i] == np - n + i) --i;
        if (i < 0) return false;
        ++idx[i];
        for (int j = i + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
        return true;
    };
    if (np < n) return best;
    do {
        // Solve the n x n system via Gaussian elimination.
        std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
        for (int r = 0; r < n; ++r) {
            for (int j = 0; j < n; ++j) a[r][j] = planes[idx[r]].a[j];
            a[r][n] = planes[idx[r]].rhs;
        }
        bool singular = false;
        for (int c = 0; c < n && !singular; ++c) {
            int piv = c;
            for (int r = c + 1; r < n; ++r)
                if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
            if (std::abs(a[piv][c]) < 1e-9) {
                singular = true;
                break;
            }
            std::swap(a[c], a[piv]);
            for (int r = 0; r < n; ++r) {
                if (r == c) continue;
                const double f = a[r][c] / a[c][c];
                for (int j = c; j <= n; ++j) a[r][j] -= f * a[c][j];
            }
        }
        if (singular) continue;
        std::vector<double> x(n);
        for (int j = 0; j < n; ++j) x[j] = a[j][n] / a[j][j];
        if (!feasible(x)) continue;
        double obj = m.objective_constant;
        for (int j = 0; j < n; ++j) obj += m.objective[j] * x[j];
        if (!best || obj < *best) best = obj;
    } while (advance());
    return best;
}

MilpModel random_lp(ngdr::test::Rng& rng, int nvars, int nrows) {
    MilpModel m;
    for (int j = 0; j < nvars; ++j) {
        const double lo = -static_cast<double>(rng.integer(0, 3));
        const double hi = static_cast<double>(rng.integer(1, 4)) * 0.5 + lo + 0.5;
        m.add_continuous("x" + std::to_string(j), lo, hi);
        m.set_objective(j, static_cast<double>(rng.integer(-4, 4)) * 0.5);
    }
    for (int r = 0; r < nrows; ++r) {
        std::vector<LinearTerm> terms;
        for (int j = 0; j < nvars; ++j) {
            const int c = rng.integer(-3, 3);
            if (c != 0) terms.push_back({j, static_cast<double>(c)});
        }
        if (terms.empty()) continue;
        const int rel = rng.integer(0, 2);
        m.add_constraint(terms,
                         rel == 0   ? Relation::le
                         : rel == 1 ? Relation::ge
                                    : Relation::eq,
                         static_cast<double>(rng.integer(-4, 4)));
    }
    return m;
}

// Exhaustive binary enumeration with the continuous part resolved by the
// LP relaxation at fixed binaries (spec's oracle recipe).
std::optional<double> enumerate_milp(const MilpModel& m) {
    std::vector<int> binaries;
    for (int j = 0; j < m.num_vars(); ++j)
        if (m.variables[j].kind == VarKind::binary) binaries.push_back(j);
    std::optional<double> best;
    for (std::uint64_t mask = 0; mask < (1ULL << binaries.size()); ++mask) {
        MilpModel fixed = m;
        for (std::size_t i = 0; i < binaries.size(); ++i) {
            const double v = (mask >> i) & 1 ? 1.0 : 0.0;
            fixed.variables[binaries[i]].kind = VarKind::continuous;
            fixed.variables[binaries[i]].lower = v;
            fixed.variables[binaries[i]].upper = v;
        }
        const MilpSolution sol = solve_lp_relaxation(fixed);
        if (sol.status != SolveStatus::optimal) continue;
        if (!best || sol.objective_value < *best) best = sol.objective_value;
    }
    return best;
}

} // namespace

TEST_CASE("bound-attaining LP") {
    MilpModel m;
    m.add_continuous("x", 0.0, 1.0);
    m.set_objective(0, 1.0);
    const auto sol = solve_lp_relaxation(m);
    CHECK(sol.status == SolveStatus::optimal);
    CHECK(sol.objective_value == doctest::Approx(0.0));
}

TEST_CASE("two-variable polytope") {
    MilpModel m;
    m.add_continuous("x", 0.0, 1.0);
    m.add_continuous("y", 0.0, 1.0);
    m.set_objective(0, -1.0);
    m.set_objective(1, -1.0);
    m.add_constraint({{0, 1.0}, {1, 1.0}}, Relation::le, 1.0);
    const auto sol = solve_lp_relaxation(m);
    CHECK(sol.status == SolveStatus::optimal);
    CHECK(sol.objective_value == doctest::Approx(-1.0));
}

TEST_CASE("contradictory rows are infeasible") {
    MilpModel m;
    m.add_continuous("x", 0.0, 1.0);
    m.add_constraint({{0, 1.0}}, Relation::ge, 1.0);
    m.add_constraint({{0, 1.0}}, Relation::le, 0.0);
    CHECK(solve_lp_relaxation(m).status == SolveStatus::infeasible);
    CHECK(solve_milp(m).status == SolveStatus::infeasible);
}

TEST_CASE("unbounded LP is reported") {
    MilpModel m;
    m.add_continuous("x", 0.0, std::numeric_limits<double>::infinity());
    m.set_objective(0, -1.0);
    CHECK(solve_lp_relaxation(m).status == SolveStatus::unbounded);
}

TEST_CASE("only feasible binary point") {
    MilpModel m;
    m.add_binary("x");
    m.set_objective(0, -1.0);
    m.add_constraint({{0, 1.0}}, Relation::le, 0.5);
    const auto sol = solve_milp(m);
    CHECK(sol.status == SolveStatus::optimal);
    CHECK(sol.objective_value == doctest::Approx(0.0));
    CHECK(sol.values[0] == doctest::Approx(0.0));
}

TEST_CASE("model validation rejects malformed input") {
    MilpModel m;
    m.add_binary("b");
    m.variables[0].upper = 2.0;
    CHECK_THROWS_AS(m.validate(), ValidationError);

    MilpModel m2;
    m2.add_continuous("x", 0.0, 1.0);
    m2.add_constraint({{5, 1.0}}, Relation::le, 1.0);
    CHECK_THROWS_AS(m2.validate(), ValidationError);

    MilpModel m3;
    m3.add_continuous("x", 0.0, 1.0);
    m3.add_constraint({{0, std::numeric_limits<double>::quiet_NaN()}}, Relation::le, 1.0);
    CHECK_THROWS_AS(m3.validate(), ValidationError);
}

TEST_CASE("random LPs agree with vertex enumeration") {
    ngdr::test::Rng rng(4001);
    int solved = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const MilpModel m = random_lp(rng, rng.integer(2, 4), rng.integer(0, 4));
        const auto expected = brute_lp(m);
        const auto sol = solve_lp_relaxation(m);
        if (!expected) {
            CHECK(sol.status == SolveStatus::infeasible);
        } else {
            REQUIRE_MESSAGE(sol.status == SolveStatus::optimal, "trial ", trial);
            CHECK_MESSAGE(sol.objective_value == doctest::Approx(*expected).epsilon(1e-7),
                          "trial ", trial);
            ++solved;
        }
    }
    CHECK(solved > 100); // the generator must produce plenty of feasible LPs
}

TEST_CASE("random MILPs agree with exhaustive binary enumeration") {
    ngdr::test::Rng rng(4002);
    SolveOptions opts;
    opts.gap_tol = 1e-9;
    int feasible_count = 0;
    for (int trial = 0; trial < 150; ++trial) {
        MilpModel m = random_lp(rng, rng.integer(1, 3), rng.integer(1, 3));
        const int extra_bins = rng.integer(2, 5);
        for (int b = 0; b < extra_bins; ++b) {
            const int v = m.add_binary("b" + std::to_string(b));
            m.set_objective(v, static_cast<double>(rng.integer(-3, 3)) * 0.5);
        }
        // Couple binaries into the rows.
        for (auto& c : m.constraints)
            for (int b = 0; b < extra_bins; ++b)
                if (rng.flip())
                    c.terms.push_back({m.num_vars() - 1 - b,
                                       static_cast<double>(rng.integer(-2, 2))});
        m.validate();

        const auto expected = enumerate_milp(m);
        const auto sol = solve_milp(m, opts);
        if (!expected) {
            CHECK_MESSAGE(sol.status == SolveStatus::infeasible, "trial ", trial);
        } else {
            REQUIRE_MESSAGE(sol.status == SolveStatus::optimal, "trial ", trial);
            CHECK_MESSAGE(std::abs(sol.objective_value - *expected) <= 1e-6, "trial ", trial,
                          " got ", sol.objective_value, " want ", *expected);
            CHECK(sol.best_bound <= sol.objective_value + 1e-9);
            ++feasible_count;
        }
    }
    CHECK(feasible_count > 50);
}

TEST_CASE("definitional chains are eliminated and reconstructed exactly") {
    // y_0 = 2; y_{k+1} = 0.9 y_k + q_k; band rows keep y near 5:
    // the solver must agree with enumeration over the 2^4 schedules.
    ngdr::test::Rng rng(4003);
    for (int trial = 0; trial < 20; ++trial) {
        MilpModel m;
        const int steps = 4;
        std::vector<int> y, q;
        for (int k = 0; k <= steps; ++k)
            y.push_back(m.add_continuous("y" + std::to_string(k),
                                         -std::numeric_limits<double>::infinity(),
                                         std::numeric_limits<double>::infinity()));
        for (int k = 0; k < steps; ++k) q.push_back(m.add_binary("q" + std::to_string(k)));
        const int dev = m.add_continuous("dev", 0.0, std::numeric_limits<double>::infinity());
        const double decay = rng.uniform(0.7, 0.95);
        const double gain = rng.uniform(0.5, 2.0);
        const double y0 = rng.uniform(0.0, 4.0);
        const double target = rng.uniform(3.0, 6.0);
        m.add_constraint({{y[0], 1.0}}, Relation::eq, y0);
        for (int k = 0; k < steps; ++k)
            m.add_constraint({{y[k + 1], 1.0}, {y[k], -decay}, {q[k], -gain}}, Relation::eq, 0.0);
        for (int k = 1; k <= steps; ++k) {
            m.add_constraint({{y[k], 1.0}, {dev, 1.0}}, Relation::ge, target);
            m.add_constraint({{y[k], 1.0}, {dev, -1.0}}, Relation::le, target);
        }
        m.set_objective(dev, 1.0);

        SolveOptions opts;
        opts.gap_tol = 1e-9;
        const auto sol = solve_milp(m, opts);
        REQUIRE(sol.status == SolveStatus::optimal);
        const auto expected = enumerate_milp(m);
        REQUIRE(expected.has_value());
        CHECK(std::abs(sol.objective_value - *expected) <= 1e-6);

        // Reconstructed chain must satisfy the recursion to a tight tolerance.
        for (int k = 0; k < steps; ++k) {
            const double lhs = sol.values[y[k + 1]];
            const double rhs = decay * sol.values[y[k]] + gain * sol.values[q[k]];
            CHECK(std::abs(lhs - rhs) <= 1e-9);
        }
    }
}

TEST_CASE("solves are deterministic") {
    ngdr::test::Rng rng(4004);
    for (int trial = 0; trial < 10; ++trial) {
        MilpModel m = random_lp(rng, 3, 3);
        for (int b = 0; b < 4; ++b) {
            const int v = m.add_binary("b" + std::to_string(b));
            m.set_objective(v, static_cast<double>(rng.integer(-2, 2)));
            if (!m.constraints.empty())
                m.constraints[0].terms.push_back({v, static_cast<double>(rng.integer(-2, 2))});
        }
        const auto a = solve_milp(m);
        const auto b = solve_milp(m);
        CHECK(a.status == b.status);
        CHECK(a.objective_value == b.objective_value);
        CHECK(a.best_bound == b.best_bound);
        CHECK(a.values == b.values);
        CHECK(a.nodes == b.nodes);
    }
}

TEST_CASE("node limit returns a valid incumbent and bound") {
    ngdr::test::Rng rng(4005);
    MilpModel m = random_lp(rng, 2, 2);
    for (int b = 0; b < 8; ++b) {
        const int v = m.add_binary("b" + std::to_string(b));
        m.set_objective(v, rng.uniform(-1.0, 1.0));
    }
    SolveOptions opts;
    opts.node_limit = 1;
    const auto sol = solve_milp(m, opts);
    if (sol.has_incumbent()) {
        CHECK(sol.best_bound <= sol.objective_value + 1e-9);
        const auto exact = solve_milp(m);
        if (exact.status == SolveStatus::optimal) {
            CHECK(sol.objective_value >= exact.objective_value - 1e-9);
            CHECK(sol.best_bound <= exact.objective_value + 1e-9);
        }
    }
}

TEST_CASE("lp dump grammar smoke test") {
    MilpModel m;
    m.add_continuous("x", 0.0, 2.0);
    m.add_binary("b");
    m.set_objective(0, 1.5);
    m.set_objective(1, -1.0);
    m.add_constraint({{0, 1.0}, {1, -2.0}}, Relation::le, 3.0);
    std::ostringstream out;
    dump_lp(m, out);
    const std::string s = out.str();
    CHECK(s.find("minimize") != std::string::npos);
    CHECK(s.find("subject to") != std::string::npos);
    CHECK(s.find("bounds") != std::string::npos);
    CHECK(s.find("binaries") != std::string::npos);
    CHECK(s.find("b") != std::string::npos);
    CHECK(s.find("end") != std::string::npos);
}
