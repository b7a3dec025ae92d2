#pragma once

#include "crowdcap/model.hpp"
#include "crowdcap/plan.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace crowdcap {

/// How a winning agent selects work.
///   Fifo          - the default norm: whole tasks in FIFO scan order, then
///                   the open partial, then open a new partial.
///   RandomJob     - picks a uniformly random job and takes every part it can
///                   cover (non-decomposable demonstration mode).
///   AdversarialJob- prefers jobs untouched this epoch, spreading picks so as
///                   few jobs as possible complete (instability demo).
enum class TaskPickMode { Fifo, RandomJob, AdversarialJob };

TaskPickMode parse_task_pick(const std::string& s);

/// One GreedyAgent epoch on a single-category system. Agents enter in a
/// seeded contention order; hours sunk into partials left open at epoch end
/// are wasted (at most max r per skill). Under a non-decomposable class
/// (job-pick modes only) jobs whose tasks did not all allocate this epoch are
/// reverted at epoch end.
AllocationPlan greedy_agent_step(const QueueState& qs, const std::vector<int64_t>& arrivals,
                                 const AvailabilityDraw& u, const Scenario& sc, uint64_t seed,
                                 int64_t epoch, TaskPickMode mode = TaskPickMode::Fifo);

/// One GreedyJob epoch on a single-category system: jobs contend in seeded
/// order; a winner allocates all of its tasks iff every task skill has enough
/// aggregate category hours left, drawing hours from agents in declaration
/// order; otherwise it leaves contention empty-handed.
AllocationPlan greedy_job_step(const QueueState& qs, const std::vector<int64_t>& arrivals,
                               const AvailabilityDraw& u, const Scenario& sc, uint64_t seed,
                               int64_t epoch);

/// Counter-based one-at-a-time dispatch: each arriving job goes to the
/// feasible pool with the smallest counter (lowest index on ties), counters
/// start at the pool job backlogs and increment per dispatch.
std::vector<std::vector<int64_t>> improvised_jltt_route(const std::vector<int64_t>& arrivals,
                                                        const QueueState& qs, const Scenario& sc);

/// Improvised routing followed by an independent GreedyJob round per pool
/// (rng sub-stream keyed by pool index).
AllocationPlan improvised_jltt_greedyjob_step(const QueueState& qs,
                                              const std::vector<int64_t>& arrivals,
                                              const AvailabilityDraw& u, const Scenario& sc,
                                              uint64_t seed, int64_t epoch);

} // namespace crowdcap
