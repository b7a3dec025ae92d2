#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "crowdcap/knapsack.hpp"
#include "crowdcap/lp.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace crowdcap;

TEST_CASE("lp: single constraint") {
    LinearProgram lp;
    lp.objective = {1.0};
    lp.add_le({1.0}, 1.0);
    auto res = solve_lp(lp);
    REQUIRE(res.status == LpStatus::Optimal);
    CHECK(res.value == doctest::Approx(1.0));
    CHECK(res.x[0] == doctest::Approx(1.0));
}

TEST_CASE("lp: coupled box") {
    LinearProgram lp;
    lp.objective = {1.0, 1.0};
    lp.add_le({1.0, 0.0}, 1.0);
    lp.add_le({0.0, 1.0}, 1.0);
    lp.add_le({1.0, 1.0}, 1.5);
    auto res = solve_lp(lp);
    REQUIRE(res.status == LpStatus::Optimal);
    CHECK(res.value == doctest::Approx(1.5));
}

TEST_CASE("lp: infeasible bounds") {
    LinearProgram lp;
    lp.objective = {1.0};
    lp.add_le({-1.0}, -2.0); // x >= 2
    lp.add_le({1.0}, 1.0);   // x <= 1
    CHECK(solve_lp(lp).status == LpStatus::Infeasible);
}

TEST_CASE("lp: unbounded") {
    LinearProgram lp;
    lp.objective = {1.0, 0.0};
    lp.add_le({0.0, 1.0}, 3.0);
    CHECK(solve_lp(lp).status == LpStatus::Unbounded);
}

TEST_CASE("lp: equality rows via pairs") {
    LinearProgram lp;
    lp.objective = {2.0, 1.0};
    lp.add_eq({1.0, 1.0}, 4.0);
    lp.add_le({1.0, 0.0}, 3.0);
    auto res = solve_lp(lp);
    REQUIRE(res.status == LpStatus::Optimal);
    CHECK(res.value == doctest::Approx(7.0)); // x=3, y=1
}

TEST_CASE("lp: random instances stay feasible and weakly dual") {
    std::mt19937 gen(20240811);
    std::uniform_int_distribution<int> dim(1, 5), rows(1, 6), coeff(0, 6), bnd(0, 25);
    for (int trial = 0; trial < 200; ++trial) {
        int n = dim(gen), m = rows(gen);
        LinearProgram lp;
        lp.objective.resize(n);
        for (auto& c : lp.objective) c = coeff(gen);
        bool any_bound = false;
        for (int i = 0; i < m; ++i) {
            std::vector<double> row(n);
            bool nonzero = false;
            for (auto& a : row) {
                a = coeff(gen);
                nonzero = nonzero || a > 0;
            }
            any_bound = any_bound || nonzero;
            lp.add_le(std::move(row), bnd(gen));
        }
        if (!any_bound) lp.add_le(std::vector<double>(n, 1.0), bnd(gen));
        auto res = solve_lp(lp);
        if (res.status == LpStatus::Unbounded) continue;
        REQUIRE(res.status == LpStatus::Optimal); // b >= 0, always feasible
        const double tol = 1e-7;
        for (const auto& row : lp.rows) {
            double lhs = 0;
            for (int k = 0; k < n; ++k) lhs += row.coeffs[k] * res.x[k];
            CHECK(lhs <= row.bound + tol);
        }
        for (double xv : res.x) CHECK(xv >= -tol);
        // Weak duality: primal value <= y.b, and y must be dual feasible.
        double yb = 0;
        for (size_t i = 0; i < lp.rows.size(); ++i) {
            CHECK(res.dual[i] >= -tol);
            yb += res.dual[i] * lp.rows[i].bound;
        }
        CHECK(res.value <= yb + 1e-6);
        for (int k = 0; k < n; ++k) {
            double ya = 0;
            for (size_t i = 0; i < lp.rows.size(); ++i) ya += res.dual[i] * lp.rows[i].coeffs[k];
            CHECK(ya >= lp.objective[k] - 1e-6);
        }
    }
}

TEST_CASE("unbounded knapsack: pinned examples") {
    auto empty = unbounded_knapsack({3, 4}, {2, 3}, 0);
    CHECK(empty.objective == 0);
    CHECK(empty.counts == std::vector<int64_t>{0, 0});

    auto sat = unbounded_knapsack({1}, {1}, 5);
    CHECK(sat.objective == 5);
    CHECK(sat.counts == std::vector<int64_t>{5});

    // Frozen from the 1-D enumeration oracle.
    CHECK(test::enumerate_knapsack_1d({3, 4}, {2, 3}, 7) == 10);
    auto sol = unbounded_knapsack({3, 4}, {2, 3}, 7);
    CHECK(sol.objective == 10);
    CHECK(sol.counts == std::vector<int64_t>{2, 1});
}

TEST_CASE("unbounded knapsack: rejects positive-value zero-weight items") {
    CHECK_THROWS_AS(unbounded_knapsack({1}, {0}, 3), std::invalid_argument);
}

TEST_CASE("unbounded knapsack: equals enumeration on random instances") {
    std::mt19937 gen(7);
    std::uniform_int_distribution<int> nitems(1, 6), wdist(1, 9), vdist(0, 12), cdist(0, 30);
    for (int trial = 0; trial < 200; ++trial) {
        int n = nitems(gen);
        std::vector<int64_t> values(n), weights(n);
        for (int i = 0; i < n; ++i) {
            values[i] = vdist(gen);
            weights[i] = wdist(gen);
        }
        int64_t cap = cdist(gen);
        auto sol = unbounded_knapsack(values, weights, cap);
        CHECK(sol.objective == test::enumerate_knapsack_1d(values, weights, cap));
        int64_t used = 0, val = 0;
        for (int i = 0; i < n; ++i) {
            used += sol.counts[i] * weights[i];
            val += sol.counts[i] * values[i];
        }
        CHECK(used <= cap);
        CHECK(val == sol.objective);
    }
}

TEST_CASE("multidim knapsack: pinned examples") {
    KnapsackInstance one;
    one.values = {1};
    one.weights = {{1, 1}};
    one.capacities = {3, 5};
    auto res = multidim_knapsack_exact(one);
    REQUIRE(res.exact);
    CHECK(res.best.objective == 3);
    CHECK(res.best.counts == std::vector<int64_t>{3});

    KnapsackInstance two;
    two.values = {3, 3};
    two.weights = {{1, 2}, {2, 1}};
    two.capacities = {4, 4};
    CHECK(test::enumerate_knapsack_best(two) == 6);
    auto res2 = multidim_knapsack_exact(two);
    REQUIRE(res2.exact);
    CHECK(res2.best.objective == 6);
    CHECK(res2.best.objective <= res2.upper_bound + 1e-6);
}

TEST_CASE("multidim knapsack: equals enumeration on random d<=3 instances") {
    std::mt19937 gen(99);
    std::uniform_int_distribution<int> nitems(1, 5), ndims(1, 3), wdist(0, 5), vdist(0, 10),
        cdist(0, 12);
    for (int trial = 0; trial < 150; ++trial) {
        int n = nitems(gen), d = ndims(gen);
        KnapsackInstance inst;
        for (int i = 0; i < n; ++i) {
            inst.values.push_back(vdist(gen));
            std::vector<int64_t> row(d);
            bool nz = false;
            for (auto& w : row) {
                w = wdist(gen);
                nz = nz || w > 0;
            }
            if (!nz && inst.values.back() > 0) row[0] = 1;
            inst.weights.push_back(std::move(row));
        }
        for (int k = 0; k < d; ++k) inst.capacities.push_back(cdist(gen));
        auto res = multidim_knapsack_exact(inst);
        REQUIRE(res.exact);
        CHECK(res.best.objective == test::enumerate_knapsack_best(inst));
        CHECK(static_cast<double>(res.best.objective) <= res.upper_bound + 1e-6);
    }
}

TEST_CASE("lp_relax_and_floor: pinned examples") {
    // LP mass all on the weight-2 item: x = (3.5, 0) -> floor (3, 0).
    KnapsackInstance inst;
    inst.values = {1, 1};
    inst.weights = {{2}, {3}};
    inst.capacities = {7};
    auto floored = lp_relax_and_floor(inst);
    CHECK(floored.counts == std::vector<int64_t>{3, 0});
    CHECK(floored.objective == 3);
    auto exact = unbounded_knapsack({1, 1}, {2, 3}, 7);
    CHECK(exact.objective == 3);

    // Integral LP vertex: identical output to the exact solver.
    KnapsackInstance integral;
    integral.values = {5};
    integral.weights = {{2}};
    integral.capacities = {6};
    auto f2 = lp_relax_and_floor(integral);
    auto e2 = multidim_knapsack_exact(integral);
    REQUIRE(e2.exact);
    CHECK(f2.counts == e2.best.counts);
    CHECK(f2.objective == e2.best.objective);
}

TEST_CASE("lp_relax_and_floor: delta=1 guarantee on 500 random instances") {
    std::mt19937 gen(2025);
    std::uniform_int_distribution<int> nitems(1, 5), ndims(1, 3), wdist(0, 5), vdist(0, 10),
        cdist(0, 12);
    int violations = 0;
    for (int trial = 0; trial < 500; ++trial) {
        int n = nitems(gen), d = ndims(gen);
        KnapsackInstance inst;
        int64_t value_sum = 0;
        for (int i = 0; i < n; ++i) {
            inst.values.push_back(vdist(gen));
            value_sum += inst.values.back();
            std::vector<int64_t> row(d);
            bool nz = false;
            for (auto& w : row) {
                w = wdist(gen);
                nz = nz || w > 0;
            }
            if (!nz && inst.values.back() > 0) row[0] = 1;
            inst.weights.push_back(std::move(row));
        }
        for (int k = 0; k < d; ++k) inst.capacities.push_back(cdist(gen));

        auto floored = lp_relax_and_floor(inst);
        int64_t exact = test::enumerate_knapsack_best(inst);
        if (floored.objective < exact - value_sum) ++violations;
        // Feasibility in integers, always.
        for (int k = 0; k < d; ++k) {
            int64_t used = 0;
            for (int i = 0; i < n; ++i) used += floored.counts[i] * inst.weights[i][k];
            CHECK(used <= inst.capacities[k]);
        }
    }
    CHECK(violations == 0);
}
