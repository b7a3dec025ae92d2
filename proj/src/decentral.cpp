#include "crowdcap/decentral.hpp"

#include "crowdcap/rng.hpp"

#include "agent_fill.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace crowdcap {

TaskPickMode parse_task_pick(const std::string& s) {
    if (s == "fifo") return TaskPickMode::Fifo;
    if (s == "random-job") return TaskPickMode::RandomJob;
    if (s == "adversarial") return TaskPickMode::AdversarialJob;
    throw std::invalid_argument("unknown task_pick mode: " + s);
}

namespace {

struct AgentInstance {
    int type;
    std::vector<int64_t> remaining; // hours per skill
};

std::vector<AgentInstance> agent_instances(const Scenario& sc, int category,
                                           const AvailabilityDraw& u) {
    std::vector<AgentInstance> agents;
    for (int i = 0; i < sc.types_per_category[category]; ++i) {
        const auto& h = sc.agent_types[sc.agent_type_index(category, i)].availability;
        for (int64_t c = 0; c < u[category][i]; ++c) agents.push_back({i, h});
    }
    return agents;
}

// FIFO-mode GreedyAgent: per-skill whole-task scan, open-partial continuation,
// then a fresh partial. Flexible decomposable systems only.
AllocationPlan greedy_agent_fifo(const QueueState& qs, const std::vector<int64_t>& arrivals,
                                 const AvailabilityDraw& u, const Scenario& sc, uint64_t seed,
                                 int64_t epoch) {
    AllocationPlan plan = make_plan(1, sc);
    plan.routed_arrivals[0] = arrivals;

    auto agents = agent_instances(sc, 0, u);
    CounterRng rng(seed, epoch, CounterRng::Stream::Contention, 0);
    auto order = contention_order(rng, static_cast<int>(agents.size()));

    const int N = sc.num_job_types, S = sc.num_skills;
    // Front of the FIFO queue of untouched tasks per (j,s).
    std::vector<std::vector<int64_t>> untouched(N, std::vector<int64_t>(S, 0));
    std::vector<std::vector<int64_t>> next_index(N, std::vector<int64_t>(S, 0));
    for (int j = 0; j < N; ++j)
        for (int s : sc.task_skills(j)) untouched[j][s] = qs.at(0, j, s) + arrivals[j];

    struct Partial {
        int job_type = -1;
        int64_t task_index = 0;
        int64_t filled = 0, size = 0;
        std::vector<size_t> grant_ids;
    };
    std::vector<Partial> open(S);

    for (int idx : order) {
        AgentInstance& a = agents[idx];
        for (int s = 0; s < S; ++s) {
            int64_t rem = a.remaining[s];
            if (rem <= 0) continue;
            // (i) whole tasks, FIFO scan across types
            for (int j = 0; j < N && rem > 0; ++j) {
                int64_t r = sc.requirement(j, s);
                if (r == 0 || r > rem || untouched[j][s] == 0) continue;
                int64_t take = std::min(untouched[j][s], rem / r);
                for (int64_t k = 0; k < take; ++k) {
                    plan.grants.push_back(
                        {0, a.type, idx, j, next_index[j][s], s, Rational(r)});
                    ++next_index[j][s];
                    ++plan.departures[0][j][s];
                }
                untouched[j][s] -= take;
                rem -= take * r;
            }
            // (ii) continue the skill's open partial
            if (rem > 0 && open[s].job_type >= 0) {
                Partial& p = open[s];
                int64_t add = std::min(rem, p.size - p.filled);
                p.grant_ids.push_back(plan.grants.size());
                plan.grants.push_back(
                    {0, a.type, idx, p.job_type, p.task_index, s, Rational(add)});
                p.filled += add;
                rem -= add;
                if (p.filled == p.size) {
                    ++plan.departures[0][p.job_type][s];
                    open[s] = Partial{};
                }
            }
            // (iii) open a new partial on the first unallocated task
            if (rem > 0 && open[s].job_type < 0) {
                for (int j = 0; j < N; ++j) {
                    if (sc.requirement(j, s) == 0 || untouched[j][s] == 0) continue;
                    Partial p;
                    p.job_type = j;
                    p.task_index = next_index[j][s]++;
                    --untouched[j][s];
                    p.size = sc.requirement(j, s);
                    p.filled = std::min(rem, p.size);
                    p.grant_ids.push_back(plan.grants.size());
                    plan.grants.push_back({0, a.type, idx, j, p.task_index, s,
                                           Rational(p.filled)});
                    rem -= p.filled;
                    if (p.filled == p.size) // only possible when r == rem exactly
                        ++plan.departures[0][j][s];
                    else
                        open[s] = p;
                    break;
                }
            }
            a.remaining[s] = rem;
        }
    }

    // Open partials revert: hours are wasted, the task stays queued.
    std::vector<char> drop(plan.grants.size(), 0);
    for (int s = 0; s < S; ++s) {
        if (open[s].job_type < 0) continue;
        plan.wasted_hours[s] += Rational(open[s].filled);
        for (size_t g : open[s].grant_ids) drop[g] = 1;
    }
    if (!plan.grants.empty()) {
        std::vector<HourGrant> kept;
        kept.reserve(plan.grants.size());
        for (size_t g = 0; g < plan.grants.size(); ++g)
            if (!drop[g]) kept.push_back(plan.grants[g]);
        plan.grants = std::move(kept);
    }

    for (int j = 0; j < N; ++j)
        for (int s : sc.task_skills(j)) {
            int64_t d = plan.departures[0][j][s];
            if (d > 0) {
                plan.split.zref(0, j, s) = d;
                plan.split.count(j, s) = d;
            }
        }
    return plan;
}

// Job-pick GreedyAgent modes. Agents take every coverable part of one chosen
// job at a time. Non-decomposable classes revert incomplete jobs at epoch
// end; decomposable classes keep task-level departures.
AllocationPlan greedy_agent_jobpick(const QueueState& qs, const std::vector<int64_t>& arrivals,
                                    const AvailabilityDraw& u, const Scenario& sc, uint64_t seed,
                                    int64_t epoch, TaskPickMode mode) {
    AllocationPlan plan = make_plan(1, sc);
    plan.routed_arrivals[0] = arrivals;
    const int N = sc.num_job_types, S = sc.num_skills;

    auto agents = agent_instances(sc, 0, u);
    CounterRng rng(seed, epoch, CounterRng::Stream::Contention, 0);
    auto order = contention_order(rng, static_cast<int>(agents.size()));

    // Q_{j,s} is equal across a job's skills here (whole-job dynamics).
    std::vector<int64_t> total(N, 0);
    for (int j = 0; j < N; ++j) total[j] = qs.at(0, j, sc.task_skills(j)[0]) + arrivals[j];

    struct Touched {
        std::vector<char> allocated;    // per skill
        std::vector<size_t> grant_ids;
        int64_t allocated_count = 0;
    };
    // (job type, instance) -> partial allocation state; instances are handed
    // out in FIFO order, draws over untouched instances are uniform by count.
    std::map<std::pair<int, int64_t>, Touched> touched;
    std::vector<int64_t> fresh(N, 0); // next untouched instance id per type

    auto coverable_fresh = [&](int j, const AgentInstance& a) {
        if (fresh[j] >= total[j]) return false;
        for (int s : sc.task_skills(j))
            if (a.remaining[s] >= sc.requirement(j, s)) return true;
        return false;
    };
    auto coverable_touched = [&](int j, const Touched& t, const AgentInstance& a) {
        auto skills = sc.task_skills(j);
        for (size_t k = 0; k < skills.size(); ++k)
            if (!t.allocated[skills[k]] && a.remaining[skills[k]] >= sc.requirement(j, skills[k]))
                return true;
        return false;
    };
    auto take_from = [&](int j, int64_t inst, Touched& t, AgentInstance& a, int agent_idx) {
        for (int s : sc.task_skills(j)) {
            int64_t r = sc.requirement(j, s);
            if (!t.allocated[s] && a.remaining[s] >= r) {
                t.allocated[s] = 1;
                ++t.allocated_count;
                a.remaining[s] -= r;
                t.grant_ids.push_back(plan.grants.size());
                plan.grants.push_back({0, a.type, agent_idx, j, inst, s, Rational(r)});
            }
        }
    };

    for (int idx : order) {
        AgentInstance& a = agents[idx];
        for (;;) {
            // Candidates: untouched instances (by count) plus touched ones.
            int64_t fresh_weight = 0;
            std::vector<int64_t> fresh_per_type(N, 0);
            for (int j = 0; j < N; ++j) {
                if (coverable_fresh(j, a)) {
                    fresh_per_type[j] = total[j] - fresh[j];
                    fresh_weight += fresh_per_type[j];
                }
            }
            std::vector<std::pair<int, int64_t>> touched_candidates;
            for (auto& [key, t] : touched)
                if (coverable_touched(key.first, t, a)) touched_candidates.push_back(key);

            int64_t weight = fresh_weight + static_cast<int64_t>(touched_candidates.size());
            if (weight == 0) break;

            int pick_type = -1;
            int64_t pick_inst = -1;
            if (mode == TaskPickMode::AdversarialJob) {
                // Prefer untouched jobs so as few jobs as possible complete;
                // when forced onto touched ones, take the least covered.
                for (int j = 0; j < N && pick_type < 0; ++j)
                    if (fresh_per_type[j] > 0) pick_type = j;
                if (pick_type >= 0) {
                    pick_inst = fresh[pick_type]++;
                } else {
                    auto best = touched_candidates.front();
                    for (const auto& key : touched_candidates)
                        if (touched[key].allocated_count < touched[best].allocated_count)
                            best = key;
                    pick_type = best.first;
                    pick_inst = best.second;
                }
            } else {
                int64_t roll = static_cast<int64_t>(rng.next_below(static_cast<uint64_t>(weight)));
                if (roll < fresh_weight) {
                    for (int j = 0; j < N; ++j) {
                        if (roll < fresh_per_type[j]) {
                            pick_type = j;
                            pick_inst = fresh[j]++;
                            break;
                        }
                        roll -= fresh_per_type[j];
                    }
                } else {
                    auto key = touched_candidates[roll - fresh_weight];
                    pick_type = key.first;
                    pick_inst = key.second;
                }
            }

            auto key = std::make_pair(pick_type, pick_inst);
            auto it = touched.find(key);
            if (it == touched.end()) {
                Touched t;
                t.allocated.assign(S, 0);
                it = touched.emplace(key, std::move(t)).first;
            }
            take_from(pick_type, pick_inst, it->second, a, idx);
        }
    }

    // Settle departures: whole jobs only (non-decomposable); incomplete jobs
    // revert with their hours wasted.
    std::vector<char> drop(plan.grants.size(), 0);
    for (auto& [key, t] : touched) {
        int j = key.first;
        auto skills = sc.task_skills(j);
        if (t.allocated_count == static_cast<int64_t>(skills.size())) {
            for (int s : skills) ++plan.departures[0][j][s];
        } else {
            for (size_t g : t.grant_ids) {
                drop[g] = 1;
                plan.wasted_hours[plan.grants[g].skill] += plan.grants[g].hours;
            }
        }
    }
    if (!plan.grants.empty()) {
        std::vector<HourGrant> kept;
        kept.reserve(plan.grants.size());
        for (size_t g = 0; g < plan.grants.size(); ++g)
            if (!drop[g]) kept.push_back(plan.grants[g]);
        plan.grants = std::move(kept);
    }
    for (int j = 0; j < N; ++j)
        for (int s : sc.task_skills(j)) {
            int64_t d = plan.departures[0][j][s];
            if (d > 0) {
                plan.split.zref(0, j, s) = d;
                plan.split.count(j, s) = d;
            }
        }
    return plan;
}

} // namespace

AllocationPlan greedy_agent_step(const QueueState& qs, const std::vector<int64_t>& arrivals,
                                 const AvailabilityDraw& u, const Scenario& sc, uint64_t seed,
                                 int64_t epoch, TaskPickMode mode) {
    if (sc.num_categories != 1)
        throw std::invalid_argument("greedy_agent_step requires a single-category scenario");
    if (qs.pools != 1) throw std::invalid_argument("greedy_agent_step expects one queue pool");
    if (mode == TaskPickMode::Fifo) {
        if (sc.job_class != SystemClass::FD)
            throw std::invalid_argument(
                "GreedyAgent (fifo) is limited to FD systems; the job-pick modes exist for the "
                "non-decomposable demonstration");
        return greedy_agent_fifo(qs, arrivals, u, sc, seed, epoch);
    }
    if (sc.job_class != SystemClass::FND)
        throw std::invalid_argument("GreedyAgent job-pick modes are FND demonstration modes");
    return greedy_agent_jobpick(qs, arrivals, u, sc, seed, epoch, mode);
}

namespace {

// Shared by the standalone single-category scheme and the per-pool step of
// the improvised routing scheme.
void greedy_job_pool(AllocationPlan& plan, int pool, int category, const QueueState& qs,
                     const std::vector<int64_t>& pool_arrivals, const AvailabilityDraw& u,
                     const Scenario& sc, uint64_t seed, int64_t epoch) {
    const int N = sc.num_job_types, S = sc.num_skills;
    std::vector<int64_t> hours(S, 0);
    for (int i = 0; i < sc.types_per_category[category]; ++i) {
        const auto& h = sc.agent_types[sc.agent_type_index(category, i)].availability;
        for (int s = 0; s < S; ++s) hours[s] += u[category][i] * h[s];
    }

    std::vector<detail::AgentCursor> cursors(S);
    for (int s = 0; s < S; ++s) cursors[s] = detail::AgentCursor{&sc, &u, category, s};

    std::vector<int64_t> remaining(N, 0);
    int64_t total = 0;
    for (int j = 0; j < N; ++j) {
        remaining[j] = qs.at(pool, j, sc.task_skills(j)[0]) + pool_arrivals[j];
        total += remaining[j];
    }

    CounterRng rng(seed, epoch, CounterRng::Stream::Contention, static_cast<uint64_t>(pool));
    auto feasible = [&](int j) {
        for (int s : sc.task_skills(j))
            if (hours[s] < sc.requirement(j, s)) return false;
        return true;
    };

    while (total > 0) {
        // Once no queued type fits, every remaining job would leave
        // contention without allocating; stop early.
        bool any = false;
        for (int j = 0; j < N && !any; ++j) any = remaining[j] > 0 && feasible(j);
        if (!any) break;

        int64_t roll = static_cast<int64_t>(rng.next_below(static_cast<uint64_t>(total)));
        int j = 0;
        while (roll >= remaining[j]) roll -= remaining[j++];
        --remaining[j];
        --total;
        if (!feasible(j)) continue; // the winner leaves contention empty-handed
        for (int s : sc.task_skills(j)) {
            int64_t r = sc.requirement(j, s);
            hours[s] -= r;
            cursors[s].draw_int(r, j, plan.departures[pool][j][s], plan.grants);
            ++plan.departures[pool][j][s];
        }
    }

    for (int j = 0; j < N; ++j)
        for (int s : sc.task_skills(j)) {
            int64_t d = plan.departures[pool][j][s];
            if (d > 0) {
                plan.split.zref(category, j, s) = d;
                plan.split.count(j, s) += d;
            }
        }
}

} // namespace

AllocationPlan greedy_job_step(const QueueState& qs, const std::vector<int64_t>& arrivals,
                               const AvailabilityDraw& u, const Scenario& sc, uint64_t seed,
                               int64_t epoch) {
    if (sc.num_categories != 1)
        throw std::invalid_argument("greedy_job_step requires a single-category scenario");
    if (qs.pools != 1) throw std::invalid_argument("greedy_job_step expects one queue pool");
    AllocationPlan plan = make_plan(1, sc);
    plan.routed_arrivals[0] = arrivals;
    greedy_job_pool(plan, 0, 0, qs, arrivals, u, sc, seed, epoch);
    return plan;
}

std::vector<std::vector<int64_t>> improvised_jltt_route(const std::vector<int64_t>& arrivals,
                                                        const QueueState& qs,
                                                        const Scenario& sc) {
    const int L = sc.num_categories;
    if (qs.pools != L)
        throw std::invalid_argument("improvised_jltt_route expects one pool per category");
    std::vector<std::vector<int64_t>> routed(L, std::vector<int64_t>(sc.num_job_types, 0));
    for (int j = 0; j < sc.num_job_types; ++j) {
        auto feasible = sc.graph.job_neighbors(j);
        if (feasible.empty()) throw std::invalid_argument("job type with no feasible category");
        std::vector<int64_t> counter(L, 0);
        for (int l : feasible) counter[l] = qs.at(l, j, sc.task_skills(j)[0]);
        for (int64_t n = 0; n < arrivals[j]; ++n) {
            int best = feasible[0];
            for (int l : feasible)
                if (counter[l] < counter[best]) best = l; // lowest index wins ties
            ++counter[best];
            ++routed[best][j];
        }
    }
    return routed;
}

AllocationPlan improvised_jltt_greedyjob_step(const QueueState& qs,
                                              const std::vector<int64_t>& arrivals,
                                              const AvailabilityDraw& u, const Scenario& sc,
                                              uint64_t seed, int64_t epoch) {
    const int L = sc.num_categories;
    auto routed = improvised_jltt_route(arrivals, qs, sc);
    AllocationPlan plan = make_plan(L, sc);
    plan.routed_arrivals = routed;
    for (int l = 0; l < L; ++l)
        greedy_job_pool(plan, l, l, qs, routed[l], u, sc, seed, epoch);
    return plan;
}

} // namespace crowdcap
