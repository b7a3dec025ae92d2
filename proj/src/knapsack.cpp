#include "crowdcap/knapsack.hpp"

#include "crowdcap/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace crowdcap {

namespace {

void validate_instance(const KnapsackInstance& inst) {
    if (inst.weights.size() != inst.values.size())
        throw std::invalid_argument("knapsack values/weights size mismatch");
    for (int i = 0; i < inst.items(); ++i) {
        if (static_cast<int>(inst.weights[i].size()) != inst.dimensions())
            throw std::invalid_argument("knapsack weight row dimension mismatch");
        if (inst.values[i] < 0) throw std::invalid_argument("knapsack value must be >= 0");
        bool all_zero = true;
        for (int64_t w : inst.weights[i]) {
            if (w < 0) throw std::invalid_argument("knapsack weight must be >= 0");
            all_zero = all_zero && w == 0;
        }
        if (all_zero && inst.values[i] > 0)
            throw std::invalid_argument("positive-value item with zero weight in every dimension");
    }
    for (int64_t c : inst.capacities)
        if (c < 0) throw std::invalid_argument("knapsack capacity must be >= 0");
}

LinearProgram relaxation(const KnapsackInstance& inst) {
    LinearProgram lp;
    lp.objective.resize(inst.items());
    for (int i = 0; i < inst.items(); ++i) lp.objective[i] = static_cast<double>(inst.values[i]);
    for (int d = 0; d < inst.dimensions(); ++d) {
        std::vector<double> row(inst.items());
        for (int i = 0; i < inst.items(); ++i) row[i] = static_cast<double>(inst.weights[i][d]);
        lp.add_le(std::move(row), static_cast<double>(inst.capacities[d]));
    }
    return lp;
}

// Max count of one more unit of item i under the remaining capacities.
int64_t max_count(const KnapsackInstance& inst, int item, const std::vector<int64_t>& caps) {
    int64_t mc = std::numeric_limits<int64_t>::max();
    bool bounded = false;
    for (int d = 0; d < inst.dimensions(); ++d) {
        int64_t w = inst.weights[item][d];
        if (w > 0) {
            mc = std::min(mc, caps[d] / w);
            bounded = true;
        }
    }
    return bounded ? mc : 0; // zero-weight items carry zero value (validated)
}

struct BnbState {
    const KnapsackInstance* inst;
    int64_t node_budget;
    int64_t nodes = 0;
    bool exhausted = false;
    std::vector<int64_t> best_counts;
    int64_t best_value = 0;
    std::vector<int64_t> counts;
    std::vector<char> fixed;
};

void bnb(BnbState& st, std::vector<int64_t>& caps, int64_t value) {
    if (++st.nodes > st.node_budget) {
        st.exhausted = true;
        return;
    }
    const auto& inst = *st.inst;

    // LP bound over the free items with the remaining capacities.
    KnapsackInstance sub;
    std::vector<int> free_items;
    for (int i = 0; i < inst.items(); ++i) {
        if (!st.fixed[i] && inst.values[i] > 0) {
            free_items.push_back(i);
            sub.values.push_back(inst.values[i]);
            sub.weights.push_back(inst.weights[i]);
        }
    }
    if (free_items.empty()) {
        if (value > st.best_value) {
            st.best_value = value;
            st.best_counts = st.counts;
        }
        return;
    }
    sub.capacities = caps;
    LpResult lp = solve_lp(relaxation(sub));
    double bound = value + (lp.status == LpStatus::Optimal ? lp.value : 0.0);
    if (std::floor(bound + 1e-6) <= static_cast<double>(st.best_value)) return;

    // Integral LP vertex: take it directly (exact integer feasibility check).
    bool integral = lp.status == LpStatus::Optimal;
    if (integral) {
        for (double xv : lp.x)
            if (std::fabs(xv - std::llround(xv)) > 1e-7) {
                integral = false;
                break;
            }
    }
    if (integral) {
        std::vector<int64_t> cand(st.counts);
        std::vector<int64_t> used(inst.dimensions(), 0);
        bool ok = true;
        for (size_t k = 0; k < free_items.size(); ++k) {
            int64_t c = std::llround(lp.x[k]);
            cand[free_items[k]] += c;
            for (int d = 0; d < inst.dimensions(); ++d) used[d] += c * inst.weights[free_items[k]][d];
        }
        for (int d = 0; d < inst.dimensions(); ++d) ok = ok && used[d] <= caps[d];
        if (ok) {
            int64_t v = value;
            for (size_t k = 0; k < free_items.size(); ++k)
                v += std::llround(lp.x[k]) * inst.values[free_items[k]];
            if (v > st.best_value) {
                st.best_value = v;
                st.best_counts = cand;
            }
            return;
        }
    }

    // Branch on the fractional variable with the largest LP value.
    int branch = free_items[0];
    double best_x = -1.0;
    if (lp.status == LpStatus::Optimal) {
        for (size_t k = 0; k < free_items.size(); ++k) {
            if (std::fabs(lp.x[k] - std::llround(lp.x[k])) > 1e-7 && lp.x[k] > best_x) {
                best_x = lp.x[k];
                branch = free_items[k];
            }
        }
    }
    st.fixed[branch] = 1;
    int64_t hi = max_count(inst, branch, caps);
    for (int64_t c = hi; c >= 0 && !st.exhausted; --c) { // high-count branch first
        for (int d = 0; d < inst.dimensions(); ++d) caps[d] -= c * inst.weights[branch][d];
        st.counts[branch] = c;
        bnb(st, caps, value + c * inst.values[branch]);
        st.counts[branch] = 0;
        for (int d = 0; d < inst.dimensions(); ++d) caps[d] += c * inst.weights[branch][d];
    }
    st.fixed[branch] = 0;
}

} // namespace

KnapsackSolution unbounded_knapsack(const std::vector<int64_t>& values,
                                    const std::vector<int64_t>& weights, int64_t capacity) {
    if (values.size() != weights.size())
        throw std::invalid_argument("knapsack values/weights size mismatch");
    if (capacity < 0) throw std::invalid_argument("knapsack capacity must be >= 0");
    const int n = static_cast<int>(values.size());
    for (int i = 0; i < n; ++i) {
        if (values[i] < 0 || weights[i] < 0)
            throw std::invalid_argument("knapsack entries must be >= 0");
        if (weights[i] == 0 && values[i] > 0)
            throw std::invalid_argument("positive-value item with zero weight");
    }

    KnapsackSolution sol;
    sol.counts.assign(n, 0);
    if (capacity == 0) return sol;

    std::vector<int64_t> dp(capacity + 1, 0);
    std::vector<int> choice(capacity + 1, -1);
    for (int64_t c = 1; c <= capacity; ++c) {
        dp[c] = dp[c - 1];
        choice[c] = -1;
        for (int i = 0; i < n; ++i) {
            if (values[i] == 0 || weights[i] > c) continue;
            int64_t cand = dp[c - weights[i]] + values[i];
            if (cand > dp[c]) {
                dp[c] = cand;
                choice[c] = i;
            }
        }
    }
    sol.objective = dp[capacity];
    int64_t c = capacity;
    while (c > 0) {
        if (choice[c] < 0) {
            --c;
            continue;
        }
        ++sol.counts[choice[c]];
        c -= weights[choice[c]];
    }
    return sol;
}

double knapsack_lp_bound(const KnapsackInstance& inst) {
    validate_instance(inst);
    LpResult lp = solve_lp(relaxation(inst));
    return lp.status == LpStatus::Optimal ? lp.value : 0.0;
}

BnbResult multidim_knapsack_exact(const KnapsackInstance& inst, int64_t node_budget) {
    validate_instance(inst);
    if (node_budget <= 0) throw std::invalid_argument("node_budget must be positive");

    BnbResult res;
    res.upper_bound = knapsack_lp_bound(inst);

    BnbState st;
    st.inst = &inst;
    st.node_budget = node_budget;
    st.counts.assign(inst.items(), 0);
    st.best_counts.assign(inst.items(), 0);
    st.fixed.assign(inst.items(), 0);
    // Seed the incumbent with the LP-floor point so pruning bites early.
    KnapsackSolution seed = lp_relax_and_floor(inst);
    st.best_counts = seed.counts;
    st.best_value = seed.objective;

    std::vector<int64_t> caps = inst.capacities;
    bnb(st, caps, 0);

    res.exact = !st.exhausted;
    res.best.counts = st.best_counts;
    res.best.objective = st.best_value;
    res.nodes = st.nodes;
    return res;
}

KnapsackSolution lp_relax_and_floor(const KnapsackInstance& inst) {
    validate_instance(inst);
    KnapsackSolution sol;
    sol.counts.assign(inst.items(), 0);

    LpResult lp = solve_lp(relaxation(inst));
    if (lp.status != LpStatus::Optimal) return sol; // empty instance

    for (int i = 0; i < inst.items(); ++i)
        sol.counts[i] = static_cast<int64_t>(std::floor(lp.x[i] + 1e-7));

    // The snap above only matters when the LP vertex is integral up to double
    // noise; re-verify in integers and back off if it ever overshoots.
    for (int d = 0; d < inst.dimensions(); ++d) {
        int64_t used = 0;
        for (int i = 0; i < inst.items(); ++i) used += sol.counts[i] * inst.weights[i][d];
        while (used > inst.capacities[d]) {
            int victim = -1;
            int64_t wmax = 0;
            for (int i = 0; i < inst.items(); ++i) {
                if (sol.counts[i] > 0 && inst.weights[i][d] > wmax) {
                    wmax = inst.weights[i][d];
                    victim = i;
                }
            }
            if (victim < 0) throw std::logic_error("infeasible floor with empty counts");
            --sol.counts[victim];
            used -= wmax;
        }
    }
    sol.objective = 0;
    for (int i = 0; i < inst.items(); ++i) sol.objective += sol.counts[i] * inst.values[i];
    return sol;
}

} // namespace crowdcap
