#include "crowdcap/central.hpp"

#include "crowdcap/knapsack.hpp"
#include "crowdcap/lp.hpp"
#include "crowdcap/maxflow.hpp"

#include "agent_fill.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace crowdcap {

namespace {

int64_t category_hours(const AvailabilityDraw& u, const Scenario& sc, int l, int s) {
    int64_t total = 0;
    for (int i = 0; i < sc.types_per_category[l]; ++i)
        total += u[l][i] * sc.agent_types[sc.agent_type_index(l, i)].availability[s];
    return total;
}

// Per-skill unbounded knapsacks for a decomposable single category.
void solve_category_decomposable(const Scenario& sc, const std::vector<int64_t>& hours,
                                 const std::vector<std::vector<int64_t>>& weight,
                                 const std::vector<char>& allowed,
                                 std::vector<std::vector<int64_t>>& counts) {
    for (int s = 0; s < sc.num_skills; ++s) {
        std::vector<int64_t> values, sizes;
        std::vector<int> items;
        for (int j = 0; j < sc.num_job_types; ++j) {
            if (!allowed[j] || sc.requirement(j, s) == 0 || weight[j][s] <= 0) continue;
            items.push_back(j);
            values.push_back(weight[j][s]);
            sizes.push_back(sc.requirement(j, s));
        }
        if (items.empty()) continue;
        auto sol = unbounded_knapsack(values, sizes, hours[s]);
        for (size_t k = 0; k < items.size(); ++k) counts[items[k]][s] = sol.counts[k];
    }
}

// Multi-dimensional knapsack (equal counts across a job's skills) for a
// non-decomposable or inflexible single category.
void solve_category_nondecomposable(const Scenario& sc, const std::vector<int64_t>& hours,
                                    const std::vector<std::vector<int64_t>>& weight,
                                    const std::vector<char>& allowed,
                                    const MaxWeightOptions& opts,
                                    std::vector<std::vector<int64_t>>& counts) {
    std::vector<int> items;
    std::vector<int64_t> values;
    for (int j = 0; j < sc.num_job_types; ++j) {
        if (!allowed[j]) continue;
        int64_t v = 0;
        for (int s : sc.task_skills(j)) v += weight[j][s];
        if (v > 0) {
            items.push_back(j);
            values.push_back(v);
        }
    }
    if (items.empty()) return;

    std::vector<int> dims;
    for (int s = 0; s < sc.num_skills; ++s)
        for (int j : items)
            if (sc.requirement(j, s) > 0) {
                dims.push_back(s);
                break;
            }

    KnapsackInstance inst;
    inst.values = values;
    for (int j : items) {
        std::vector<int64_t> row;
        for (int s : dims) row.push_back(sc.requirement(j, s));
        inst.weights.push_back(std::move(row));
    }
    for (int s : dims) inst.capacities.push_back(hours[s]);

    // Exact within the node budget; past it the incumbent already dominates
    // the LP-floor point, which is the documented fallback.
    auto res = multidim_knapsack_exact(inst, opts.node_budget);
    for (size_t k = 0; k < items.size(); ++k) {
        int j = items[k];
        for (int s : sc.task_skills(j)) counts[j][s] = res.best.counts[k];
    }
}

// LP relaxation of the multi-category MaxWeight, floor rounding, and an exact
// split reconstruction (per-skill max-flow for flexible classes).
CategorySplit multi_category_solve(const QueueState& qs, const AvailabilityDraw& u,
                                   const Scenario& sc, const MaxWeightOptions& opts) {
    const int L = sc.num_categories, N = sc.num_job_types, S = sc.num_skills;
    CategorySplit split(L, N, S);
    std::vector<std::vector<int64_t>> hours(L, std::vector<int64_t>(S, 0));
    for (int l = 0; l < L; ++l)
        for (int s = 0; s < S; ++s) hours[l][s] = category_hours(u, sc, l, s);

    if (!is_flexible(sc.job_class)) {
        // Whole jobs per category: variables z^l_j, floored individually.
        std::vector<std::array<int, 2>> vars;
        LinearProgram lp;
        for (int j = 0; j < N; ++j) {
            int64_t w = 0;
            for (int s : sc.task_skills(j)) w += qs.at(0, j, s);
            if (w <= 0) continue;
            for (int l : sc.graph.job_neighbors(j)) {
                vars.push_back({j, l});
                lp.objective.push_back(static_cast<double>(w));
            }
        }
        if (vars.empty()) return split;

        if (opts.use_exact) {
            // Small-instance exact route: one knapsack item per (j,l) pair over
            // the (l,s) capacity grid.
            KnapsackInstance inst;
            for (size_t v = 0; v < vars.size(); ++v) {
                inst.values.push_back(static_cast<int64_t>(lp.objective[v]));
                std::vector<int64_t> row(static_cast<size_t>(L) * S, 0);
                for (int s = 0; s < S; ++s)
                    row[static_cast<size_t>(vars[v][1]) * S + s] = sc.requirement(vars[v][0], s);
                inst.weights.push_back(std::move(row));
            }
            for (int l = 0; l < L; ++l)
                for (int s = 0; s < S; ++s) inst.capacities.push_back(hours[l][s]);
            auto res = multidim_knapsack_exact(inst, opts.node_budget);
            for (size_t v = 0; v < vars.size(); ++v) {
                auto [j, l] = vars[v];
                for (int s : sc.task_skills(j)) {
                    split.zref(l, j, s) = res.best.counts[v];
                    split.count(j, s) += res.best.counts[v];
                }
            }
            return split;
        }

        for (int l = 0; l < L; ++l) {
            for (int s = 0; s < S; ++s) {
                std::vector<double> row(vars.size(), 0.0);
                bool any = false;
                for (size_t v = 0; v < vars.size(); ++v) {
                    if (vars[v][1] == l && sc.requirement(vars[v][0], s) > 0) {
                        row[v] = static_cast<double>(sc.requirement(vars[v][0], s));
                        any = true;
                    }
                }
                if (any) lp.add_le(std::move(row), static_cast<double>(hours[l][s]));
            }
        }
        auto res = solve_lp(lp);
        if (res.status != LpStatus::Optimal)
            throw std::logic_error("multi-category MaxWeight LP not optimal");
        std::vector<std::vector<int64_t>> zint(L, std::vector<int64_t>(N, 0));
        for (size_t v = 0; v < vars.size(); ++v)
            zint[vars[v][1]][vars[v][0]] = static_cast<int64_t>(std::floor(res.x[v] + 1e-7));
        // Double-noise guard: verify the floored point in integers.
        for (int l = 0; l < L; ++l) {
            for (int s = 0; s < S; ++s) {
                int64_t used = 0;
                for (int j = 0; j < N; ++j) used += zint[l][j] * sc.requirement(j, s);
                while (used > hours[l][s]) {
                    int victim = -1;
                    int64_t wmax = 0;
                    for (int j = 0; j < N; ++j)
                        if (zint[l][j] > 0 && sc.requirement(j, s) > wmax) {
                            wmax = sc.requirement(j, s);
                            victim = j;
                        }
                    --zint[l][victim];
                    used -= wmax;
                }
            }
        }
        for (int l = 0; l < L; ++l)
            for (int j = 0; j < N; ++j)
                if (zint[l][j] > 0)
                    for (int s : sc.task_skills(j)) {
                        split.zref(l, j, s) = zint[l][j];
                        split.count(j, s) += zint[l][j];
                    }
        return split;
    }

    // Flexible classes: LP over fractional z (FND adds per-job count x_j tied
    // to the per-skill sums), floor the counts, then recover an exact rational
    // split with one integral max-flow per skill.
    std::vector<std::array<int, 3>> zvars; // (j, l, s)
    std::vector<int> zindex;               // LP column per z variable
    std::vector<int> xvar(N, -1);          // LP column of x_j (FND only)
    LinearProgram lp;
    const bool fnd = sc.job_class == SystemClass::FND;
    for (int j = 0; j < N; ++j) {
        if (fnd) {
            int64_t w = 0;
            for (int s : sc.task_skills(j)) w += qs.at(0, j, s);
            if (w <= 0) continue;
            xvar[j] = static_cast<int>(lp.objective.size());
            lp.objective.push_back(static_cast<double>(w));
        }
        for (int l : sc.graph.job_neighbors(j)) {
            for (int s : sc.task_skills(j)) {
                if (!fnd && qs.at(0, j, s) <= 0) continue;
                zvars.push_back({j, l, s});
                zindex.push_back(static_cast<int>(lp.objective.size()));
                lp.objective.push_back(fnd ? 0.0 : static_cast<double>(qs.at(0, j, s)));
            }
        }
    }
    if (lp.objective.empty()) return split;

    const int nvars = static_cast<int>(lp.objective.size());
    if (fnd) {
        // sum_l z^l_{j,s} = x_j for every task skill of j
        for (int j = 0; j < N; ++j) {
            if (xvar[j] < 0) continue;
            for (int s : sc.task_skills(j)) {
                std::vector<double> row(nvars, 0.0);
                row[xvar[j]] = -1.0;
                for (size_t k = 0; k < zvars.size(); ++k)
                    if (zvars[k][0] == j && zvars[k][2] == s) row[zindex[k]] = 1.0;
                lp.add_eq(std::move(row), 0.0);
            }
        }
    }
    for (int l = 0; l < L; ++l) {
        for (int s = 0; s < S; ++s) {
            std::vector<double> row(nvars, 0.0);
            bool any = false;
            for (size_t k = 0; k < zvars.size(); ++k) {
                if (zvars[k][1] == l && zvars[k][2] == s) {
                    row[zindex[k]] = static_cast<double>(sc.requirement(zvars[k][0], s));
                    any = true;
                }
            }
            if (any) lp.add_le(std::move(row), static_cast<double>(hours[l][s]));
        }
    }
    auto res = solve_lp(lp);
    if (res.status != LpStatus::Optimal)
        throw std::logic_error("multi-category MaxWeight LP not optimal");

    // Floor the counts.
    std::vector<std::vector<int64_t>> target(N, std::vector<int64_t>(S, 0));
    if (fnd) {
        for (int j = 0; j < N; ++j) {
            if (xvar[j] < 0) continue;
            int64_t c = static_cast<int64_t>(std::floor(res.x[xvar[j]] + 1e-7));
            for (int s : sc.task_skills(j)) target[j][s] = c;
        }
    } else {
        std::vector<std::vector<double>> asum(N, std::vector<double>(S, 0.0));
        for (size_t k = 0; k < zvars.size(); ++k)
            asum[zvars[k][0]][zvars[k][2]] += res.x[zindex[k]];
        for (int j = 0; j < N; ++j)
            for (int s = 0; s < S; ++s)
                target[j][s] = static_cast<int64_t>(std::floor(asum[j][s] + 1e-7));
    }

    // Exact split per skill via integral max-flow on hour units. Feasibility
    // holds because the scaled-down LP point routes the same supplies; the
    // retry loop only fires if a floor snap overshot by double noise.
    for (bool settled = false; !settled;) {
        settled = true;
        split = CategorySplit(L, N, S);
        for (int s = 0; s < S && settled; ++s) {
            int64_t total = 0;
            for (int j = 0; j < N; ++j) total += target[j][s] * sc.requirement(j, s);
            if (total == 0) continue;
            const int source = 0, sink = 1 + N + L;
            MaxFlow mf(sink + 1);
            BigInt infinite(1);
            for (int l = 0; l < L; ++l) infinite += hours[l][s];
            infinite += total;
            std::vector<std::vector<int>> edge_id(N);
            for (int j = 0; j < N; ++j) {
                if (target[j][s] == 0) continue;
                mf.add_edge(source, 1 + j, BigInt(target[j][s]) * sc.requirement(j, s));
                for (int l : sc.graph.job_neighbors(j))
                    edge_id[j].push_back(mf.add_edge(1 + j, 1 + N + l, infinite));
            }
            for (int l = 0; l < L; ++l) mf.add_edge(1 + N + l, sink, BigInt(hours[l][s]));
            if (mf.run(source, sink) != total) {
                int victim = -1;
                int64_t best = 0;
                for (int j = 0; j < N; ++j)
                    if (target[j][s] > best) {
                        best = target[j][s];
                        victim = j;
                    }
                if (victim < 0) throw std::logic_error("split reconstruction infeasible");
                --target[victim][s];
                if (fnd)
                    for (int s2 : sc.task_skills(victim)) target[victim][s2] = target[victim][s];
                settled = false;
                break;
            }
            for (int j = 0; j < N; ++j) {
                if (target[j][s] == 0) continue;
                auto nbrs = sc.graph.job_neighbors(j);
                for (size_t k = 0; k < nbrs.size(); ++k) {
                    BigInt f = mf.flow(edge_id[j][k]);
                    if (f != 0)
                        split.zref(nbrs[k], j, s) = Rational(f, BigInt(sc.requirement(j, s)));
                }
                split.count(j, s) = target[j][s];
            }
        }
    }
    return split;
}

} // namespace

CategorySplit maxweight_solve(const QueueState& qs, const std::vector<int64_t>& arrivals,
                              const AvailabilityDraw& u, const Scenario& sc,
                              const MaxWeightOptions& opts) {
    (void)arrivals; // weights are the queue lengths Q_{j,s}
    if (qs.pools != 1 || qs.num_jobs != sc.num_job_types || qs.num_skills != sc.num_skills)
        throw std::invalid_argument("maxweight_solve expects a single-pool queue state");

    if (sc.num_categories == 1) {
        std::vector<int64_t> hours(sc.num_skills, 0);
        for (int s = 0; s < sc.num_skills; ++s) hours[s] = category_hours(u, sc, 0, s);
        std::vector<std::vector<int64_t>> weight(sc.num_job_types,
                                                 std::vector<int64_t>(sc.num_skills, 0));
        for (int j = 0; j < sc.num_job_types; ++j)
            for (int s = 0; s < sc.num_skills; ++s) weight[j][s] = qs.at(0, j, s);
        std::vector<char> allowed(sc.num_job_types, 1);
        std::vector<std::vector<int64_t>> counts(sc.num_job_types,
                                                 std::vector<int64_t>(sc.num_skills, 0));
        if (sc.job_class == SystemClass::FD)
            solve_category_decomposable(sc, hours, weight, allowed, counts);
        else
            solve_category_nondecomposable(sc, hours, weight, allowed, opts, counts);

        CategorySplit split(1, sc.num_job_types, sc.num_skills);
        for (int j = 0; j < sc.num_job_types; ++j)
            for (int s = 0; s < sc.num_skills; ++s)
                if (counts[j][s] > 0) {
                    split.zref(0, j, s) = counts[j][s];
                    split.count(j, s) = counts[j][s];
                }
        return split;
    }
    return multi_category_solve(qs, u, sc, opts);
}

namespace {

using detail::AgentCursor;

} // namespace

AllocationPlan task_allocation(CategorySplit split, const QueueState& qs,
                               const std::vector<int64_t>& arrivals, const AvailabilityDraw& u,
                               const Scenario& sc) {
    if (qs.pools != 1) throw std::invalid_argument("task_allocation expects a single-pool state");
    auto cac = cac_check(split, u, sc);
    if (!cac.ok) throw std::invalid_argument("task_allocation: split violates CAC: " + cac.violation);

    AllocationPlan plan = make_plan(1, sc);
    plan.routed_arrivals[0] = arrivals;

    std::vector<std::vector<AgentCursor>> cursors(sc.num_categories,
                                                  std::vector<AgentCursor>(sc.num_skills));
    for (int l = 0; l < sc.num_categories; ++l)
        for (int s = 0; s < sc.num_skills; ++s) cursors[l][s] = AgentCursor{&sc, &u, l, s};

    for (int j = 0; j < sc.num_job_types; ++j) {
        for (int s : sc.task_skills(j)) {
            int64_t available = qs.at(0, j, s) + arrivals[j];
            int64_t dep = std::min<int64_t>(split.count(j, s), available);
            plan.departures[0][j][s] = dep;
            if (dep == 0) continue;

            bool integral = true;
            for (int l = 0; l < sc.num_categories && integral; ++l)
                integral = is_integer(split.zref(l, j, s));
            if (integral) {
                // Whole tasks only; consecutive FIFO blocks per category.
                int64_t lo = 0;
                for (int l = 0; l < sc.num_categories && lo < dep; ++l) {
                    int64_t zl = to_int64(split.zref(l, j, s));
                    int64_t end = std::min(lo + zl, dep);
                    for (int64_t k = lo; k < end; ++k)
                        cursors[l][s].draw_int(sc.requirement(j, s), j, k, plan.grants);
                    lo += zl;
                }
                continue;
            }

            Rational lo(0);
            Rational cap(dep);
            for (int l = 0; l < sc.num_categories; ++l) {
                const Rational& zl = split.zref(l, j, s);
                if (zl == 0) continue;
                Rational start = lo < cap ? lo : cap;
                Rational hi = lo + zl;
                Rational end = hi < cap ? hi : cap;
                lo = hi;
                if (end <= start) continue;
                // Tasks are unit intervals [k, k+1); category l serves the
                // overlap with [start, end) at r_{j,s} hours per unit.
                for (int64_t k = floor_to_int64(start); Rational(k) < end; ++k) {
                    Rational a = Rational(k) > start ? Rational(k) : start;
                    Rational b = Rational(k + 1) < end ? Rational(k + 1) : end;
                    if (b <= a) continue;
                    Rational hours = (b - a) * Rational(sc.requirement(j, s));
                    cursors[l][s].draw(hours, j, k, plan.grants);
                }
            }
        }
    }
    plan.split = std::move(split);
    return plan;
}

std::vector<std::vector<int64_t>> jltt_route(const std::vector<int64_t>& arrivals,
                                             const QueueState& qs, const Scenario& sc) {
    const int L = sc.num_categories;
    if (qs.pools != L) throw std::invalid_argument("jltt_route expects one pool per category");
    std::vector<std::vector<int64_t>> routed(L, std::vector<int64_t>(sc.num_job_types, 0));
    for (int j = 0; j < sc.num_job_types; ++j) {
        if (arrivals[j] == 0) continue;
        auto feasible = sc.graph.job_neighbors(j);
        if (feasible.empty()) throw std::invalid_argument("job type with no feasible category");
        int64_t best = -1;
        std::vector<int> argmin;
        for (int l : feasible) {
            int64_t total = 0;
            for (int s = 0; s < sc.num_skills; ++s) total += qs.at(l, j, s);
            if (best < 0 || total < best) {
                best = total;
                argmin = {l};
            } else if (total == best) {
                argmin.push_back(l);
            }
        }
        int64_t share = arrivals[j] / static_cast<int64_t>(argmin.size());
        int64_t rem = arrivals[j] % static_cast<int64_t>(argmin.size());
        for (size_t k = 0; k < argmin.size(); ++k)
            routed[argmin[k]][j] = share + (static_cast<int64_t>(k) < rem ? 1 : 0);
    }
    return routed;
}

AllocationPlan jltt_mwta_step(const QueueState& qs, const std::vector<int64_t>& arrivals,
                              const AvailabilityDraw& u, const Scenario& sc,
                              const MaxWeightOptions& opts) {
    const int L = sc.num_categories;
    auto routed = jltt_route(arrivals, qs, sc);
    AllocationPlan plan = make_plan(L, sc);
    plan.routed_arrivals = routed;

    for (int l = 0; l < L; ++l) {
        std::vector<int64_t> hours(sc.num_skills, 0);
        for (int s = 0; s < sc.num_skills; ++s) hours[s] = category_hours(u, sc, l, s);
        std::vector<std::vector<int64_t>> weight(sc.num_job_types,
                                                 std::vector<int64_t>(sc.num_skills, 0));
        for (int j = 0; j < sc.num_job_types; ++j)
            for (int s = 0; s < sc.num_skills; ++s) weight[j][s] = qs.at(l, j, s);
        std::vector<char> allowed(sc.num_job_types, 0);
        for (int j = 0; j < sc.num_job_types; ++j) allowed[j] = sc.graph.has_edge(j, l);

        // Inflexible pools keep whole jobs: equal counts across a job's
        // skills, which is the non-decomposable solver's shape.
        std::vector<std::vector<int64_t>> counts(sc.num_job_types,
                                                 std::vector<int64_t>(sc.num_skills, 0));
        solve_category_nondecomposable(sc, hours, weight, allowed, opts, counts);

        std::vector<AgentCursor> cursors(sc.num_skills);
        for (int s = 0; s < sc.num_skills; ++s) cursors[s] = AgentCursor{&sc, &u, l, s};
        for (int j = 0; j < sc.num_job_types; ++j) {
            for (int s : sc.task_skills(j)) {
                if (counts[j][s] > 0) {
                    plan.split.zref(l, j, s) = counts[j][s];
                    plan.split.count(j, s) += counts[j][s];
                }
                int64_t available = qs.at(l, j, s) + routed[l][j];
                int64_t dep = std::min<int64_t>(counts[j][s], available);
                plan.departures[l][j][s] = dep;
                for (int64_t k = 0; k < dep; ++k)
                    cursors[s].draw_int(sc.requirement(j, s), j, k, plan.grants);
            }
        }
    }
    return plan;
}

} // namespace crowdcap
