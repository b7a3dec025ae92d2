#pragma once

#include "crowdcap/capacity.hpp"
#include "crowdcap/model.hpp"
#include "crowdcap/rational.hpp"

#include <cstdint>
#include <vector>

namespace crowdcap {

/// Unallocated (j,s)-task counts, partitioned into queue pools. Central MWTA
/// and the single-category greedy schemes use one pool; JLTT-style policies
/// keep one pool per agent category.
struct QueueState {
    int pools = 1, num_jobs = 0, num_skills = 0;
    std::vector<int64_t> q; // dense (pool, j, s)

    QueueState() = default;
    QueueState(int pools_, int jobs, int skills)
        : pools(pools_), num_jobs(jobs), num_skills(skills),
          q(static_cast<size_t>(pools_) * jobs * skills, 0) {}

    int64_t& at(int p, int j, int s) {
        return q[(static_cast<size_t>(p) * num_jobs + j) * num_skills + s];
    }
    int64_t at(int p, int j, int s) const {
        return q[(static_cast<size_t>(p) * num_jobs + j) * num_skills + s];
    }
    int64_t total() const {
        int64_t t = 0;
        for (int64_t v : q) t += v;
        return t;
    }
};

/// One agent-hour slice of the v matrix: hours an agent instance puts into a
/// specific task. Hours are rational because a task may split fractionally
/// across categories at the Alg.-1 interval boundary.
struct HourGrant {
    int category = 0;
    int agent_type = 0;        // type index within category
    int64_t agent_copy = 0;    // instance among the u available agents
    int job_type = 0;
    int64_t task_index = 0;    // FIFO position within the (j,s) queue this epoch
    int skill = 0;
    Rational hours;
};

/// Full outcome of one epoch's decision.
struct AllocationPlan {
    CategorySplit split;                             // z and a (category level)
    std::vector<std::vector<int64_t>> routed_arrivals; // [pool][job type]
    std::vector<std::vector<std::vector<int64_t>>> departures; // [pool][j][s]
    std::vector<HourGrant> grants;
    std::vector<Rational> wasted_hours; // per skill: consumed but reverted

    int64_t departed_tasks() const {
        int64_t t = 0;
        for (const auto& pool : departures)
            for (const auto& row : pool)
                for (int64_t d : row) t += d;
        return t;
    }
};

inline AllocationPlan make_plan(int pools, const Scenario& sc) {
    AllocationPlan plan;
    plan.split = CategorySplit(sc.num_categories, sc.num_job_types, sc.num_skills);
    plan.routed_arrivals.assign(pools, std::vector<int64_t>(sc.num_job_types, 0));
    plan.departures.assign(
        pools, std::vector<std::vector<int64_t>>(sc.num_job_types,
                                                 std::vector<int64_t>(sc.num_skills, 0)));
    plan.wasted_hours.assign(sc.num_skills, Rational(0));
    return plan;
}

} // namespace crowdcap
