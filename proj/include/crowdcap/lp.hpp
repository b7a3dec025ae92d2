#pragma once

#include <string>
#include <vector>

namespace crowdcap {

/// maximize objective . x  subject to  rows[i].coeffs . x <= rows[i].bound,
/// x >= 0 implicit on every variable.
struct LinearProgram {
    struct Row {
        std::vector<double> coeffs;
        double bound = 0.0;
    };
    std::vector<double> objective;
    std::vector<Row> rows;

    /// a . x <= bound
    void add_le(std::vector<double> coeffs, double bound);
    /// a . x == bound (stored as two inequalities)
    void add_eq(std::vector<double> coeffs, double bound);
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> x;    // primal solution when Optimal
    double value = 0.0;       // objective at x
    std::vector<double> dual; // per-row multipliers y >= 0 (weak duality checks)
};

/// Dense two-phase tableau simplex. Bland's rule on both the entering and the
/// leaving choice, so it terminates on every input. Infeasible and unbounded
/// are statuses, never exceptions.
LpResult solve_lp(const LinearProgram& lp, double tol = 1e-9);

} // namespace crowdcap
