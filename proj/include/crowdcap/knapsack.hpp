#pragma once

#include <cstdint>
#include <vector>

namespace crowdcap {

/// Unbounded multi-dimensional knapsack data. All arithmetic is integer; the
/// MaxWeight weights Q_{j,s} arrive here as item values.
struct KnapsackInstance {
    std::vector<int64_t> values;                 // per item, >= 0
    std::vector<std::vector<int64_t>> weights;   // [item][dimension], >= 0
    std::vector<int64_t> capacities;             // per dimension, >= 0

    int dimensions() const { return static_cast<int>(capacities.size()); }
    int items() const { return static_cast<int>(values.size()); }
};

struct KnapsackSolution {
    std::vector<int64_t> counts;
    int64_t objective = 0;
};

/// Exact 1-D unbounded knapsack by DP over capacity. Rejects items that have
/// positive value and zero weight (unbounded objective).
KnapsackSolution unbounded_knapsack(const std::vector<int64_t>& values,
                                    const std::vector<int64_t>& weights, int64_t capacity);

struct BnbResult {
    bool exact = false;         // search completed within the node budget
    KnapsackSolution best;      // incumbent (optimal when exact)
    double upper_bound = 0.0;   // valid LP bound on the optimum
    int64_t nodes = 0;
};

/// Depth-first branch-and-bound with LP-relaxation bounding. Branches on the
/// fractional variable with the largest LP value, high count first.
BnbResult multidim_knapsack_exact(const KnapsackInstance& inst, int64_t node_budget = 1'000'000);

/// Solve the LP relaxation and floor every coordinate. Feasible by weight
/// monotonicity; objective >= LP optimum - sum(values) (the delta = 1 regime).
KnapsackSolution lp_relax_and_floor(const KnapsackInstance& inst);

/// LP relaxation value of the instance (used as the B&B root bound).
double knapsack_lp_bound(const KnapsackInstance& inst);

} // namespace crowdcap
