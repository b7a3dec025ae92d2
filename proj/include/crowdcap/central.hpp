#pragma once

#include "crowdcap/capacity.hpp"
#include "crowdcap/model.hpp"
#include "crowdcap/plan.hpp"

#include <cstdint>
#include <vector>

namespace crowdcap {

struct MaxWeightOptions {
    int64_t node_budget = 1'000'000;
    bool use_exact = false; // multi-category: exact B&B instead of LP + floor
};

/// One MaxWeight decision: weights are the current queue lengths Q_{j,s}.
/// Single-category decomposable dispatches to per-skill unbounded knapsacks,
/// single-category non-decomposable (or inflexible) to the multi-dimensional
/// exact solver with LP-floor fallback, and multi-category systems to the LP
/// relaxation with floor rounding. The result satisfies the allocation
/// conditions for the realized u.
CategorySplit maxweight_solve(const QueueState& qs, const std::vector<int64_t>& arrivals,
                              const AvailabilityDraw& u, const Scenario& sc,
                              const MaxWeightOptions& opts = {});

/// The ordered assignment step: tasks in FIFO order per type, categories
/// processed in index order covering consecutive (fractionally split)
/// intervals, agents within a category filling in declaration order.
/// Departures are min(allocated, Q + A). Throws if the split violates the
/// allocation conditions.
AllocationPlan task_allocation(CategorySplit split, const QueueState& qs,
                               const std::vector<int64_t>& arrivals, const AvailabilityDraw& u,
                               const Scenario& sc);

/// Join Least Total Task: all A_j(t) arrivals of type j divide equally among
/// the feasible pools minimizing sum_s Q^l_{j,s}, remainder to lowest indices.
std::vector<std::vector<int64_t>> jltt_route(const std::vector<int64_t>& arrivals,
                                             const QueueState& qs, const Scenario& sc);

/// JLTT routing followed by an independent single-category MaxWeight round in
/// every pool.
AllocationPlan jltt_mwta_step(const QueueState& qs, const std::vector<int64_t>& arrivals,
                              const AvailabilityDraw& u, const Scenario& sc,
                              const MaxWeightOptions& opts = {});

} // namespace crowdcap
