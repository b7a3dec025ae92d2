#include "crowdcap/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace crowdcap {

void LinearProgram::add_le(std::vector<double> coeffs, double bound) {
    rows.push_back({std::move(coeffs), bound});
}

void LinearProgram::add_eq(std::vector<double> coeffs, double bound) {
    rows.push_back({coeffs, bound});
    for (auto& c : coeffs) c = -c;
    rows.push_back({std::move(coeffs), -bound});
}

namespace {

// Tableau layout: columns [0, n) structural, [n, n+m) slacks, then artificials,
// last column RHS. Row m is the phase-2 objective (reduced costs, maximize),
// row m+1 the phase-1 objective when present.
struct Tableau {
    int n = 0, m = 0, art = 0;
    std::vector<std::vector<double>> a; // (m + 2) x (n + m + art + 1)
    std::vector<int> basis;             // basic variable per row
    double tol;

    int cols() const { return n + m + art + 1; }
    int rhs() const { return cols() - 1; }

    void pivot(int r, int c) {
        double inv = 1.0 / a[r][c];
        for (int j = 0; j < cols(); ++j) a[r][j] *= inv;
        a[r][c] = 1.0;
        for (size_t i = 0; i < a.size(); ++i) {
            if (static_cast<int>(i) == r) continue;
            double f = a[i][c];
            if (f == 0.0) continue;
            for (int j = 0; j < cols(); ++j) a[i][j] -= f * a[r][j];
            a[i][c] = 0.0;
        }
        basis[r] = c;
    }

    // One simplex phase on objective row `obj`, restricted to columns < limit.
    // Returns false when an improving column has no positive pivot (unbounded).
    bool run(int obj, int limit) {
        for (;;) {
            int enter = -1;
            for (int j = 0; j < limit; ++j) { // Bland: lowest improving index
                if (a[obj][j] > tol) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return true;
            int leave = -1;
            double best = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m; ++i) {
                if (a[i][enter] > tol) {
                    double ratio = a[i][rhs()] / a[i][enter];
                    if (ratio < best - tol ||
                        (ratio < best + tol && (leave < 0 || basis[i] < basis[leave]))) {
                        best = ratio;
                        leave = i;
                    }
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
        }
    }
};

} // namespace

LpResult solve_lp(const LinearProgram& lp, double tol) {
    const int n = static_cast<int>(lp.objective.size());
    const int m = static_cast<int>(lp.rows.size());
    for (const auto& row : lp.rows)
        if (static_cast<int>(row.coeffs.size()) != n)
            throw std::invalid_argument("LP row dimension mismatch");

    Tableau t;
    t.n = n;
    t.m = m;
    t.tol = tol;
    std::vector<int> art_of_row(m, -1);
    for (int i = 0; i < m; ++i)
        if (lp.rows[i].bound < 0) art_of_row[i] = t.art++;

    t.a.assign(m + 2, std::vector<double>(n + m + t.art + 1, 0.0));
    t.basis.assign(m, -1);

    for (int i = 0; i < m; ++i) {
        double sign = lp.rows[i].bound < 0 ? -1.0 : 1.0;
        for (int j = 0; j < n; ++j) t.a[i][j] = sign * lp.rows[i].coeffs[j];
        t.a[i][n + i] = sign; // slack
        t.a[i][t.rhs()] = sign * lp.rows[i].bound;
        if (art_of_row[i] >= 0) {
            t.a[i][n + m + art_of_row[i]] = 1.0;
            t.basis[i] = n + m + art_of_row[i];
        } else {
            t.basis[i] = n + i;
        }
    }
    // Phase-2 objective: maximize c.x, stored as +c so "entry > tol" improves.
    for (int j = 0; j < n; ++j) t.a[m][j] = lp.objective[j];

    if (t.art > 0) {
        // Phase-1 objective: maximize -(sum of artificials). Start from the
        // functional (-1 per artificial column), then eliminate the basic
        // artificials by adding their rows.
        for (int k = 0; k < t.art; ++k) t.a[m + 1][n + m + k] = -1.0;
        for (int i = 0; i < m; ++i) {
            if (art_of_row[i] < 0) continue;
            for (int j = 0; j < t.cols(); ++j) t.a[m + 1][j] += t.a[i][j];
        }
        if (!t.run(m + 1, n + m)) // artificial columns never re-enter
            throw std::logic_error("phase-1 simplex reported unbounded");
        // Row m+1 RHS tracks -(phase-1 objective) = leftover artificial mass.
        if (t.a[m + 1][t.rhs()] > tol) {
            LpResult res;
            res.status = LpStatus::Infeasible;
            return res;
        }
        // Pivot any lingering artificial out of the basis (degenerate rows).
        for (int i = 0; i < m; ++i) {
            if (t.basis[i] < n + m) continue;
            int enter = -1;
            for (int j = 0; j < n + m; ++j) {
                if (std::fabs(t.a[i][j]) > tol) {
                    enter = j;
                    break;
                }
            }
            if (enter >= 0) t.pivot(i, enter);
            // else: row is all-zero (redundant constraint); harmless.
        }
    }

    if (!t.run(m, n + m)) {
        LpResult res;
        res.status = LpStatus::Unbounded;
        return res;
    }

    LpResult res;
    res.status = LpStatus::Optimal;
    res.x.assign(n, 0.0);
    for (int i = 0; i < m; ++i)
        if (t.basis[i] < n) res.x[t.basis[i]] = t.a[i][t.rhs()];
    res.value = 0.0;
    for (int j = 0; j < n; ++j) res.value += lp.objective[j] * res.x[j];
    // Dual values sit in the slack columns of the objective row. Row i was
    // scaled by -1 when its bound was negative, so undo the sign there.
    res.dual.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
        double y = -t.a[m][n + i];
        if (lp.rows[i].bound < 0) y = -y;
        res.dual[i] = y;
    }
    return res;
}

} // namespace crowdcap
