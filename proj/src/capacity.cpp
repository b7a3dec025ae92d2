#include "crowdcap/capacity.hpp"

#include "crowdcap/maxflow.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace crowdcap {

namespace {

std::string idx3(int l, int j, int s) {
    std::ostringstream os;
    os << "(l=" << l << ", j=" << j << ", s=" << s << ")";
    return os.str();
}

Rational category_hours(const AvailabilityDraw& u, const Scenario& sc, int l, int s) {
    Rational total(0);
    for (int i = 0; i < sc.types_per_category[l]; ++i) {
        int t = sc.agent_type_index(l, i);
        total += Rational(u[l][i]) * Rational(sc.agent_types[t].availability[s]);
    }
    return total;
}

} // namespace

namespace {

// Integer fast path for the common case where every z is integral (all the
// single-category policies and the inflexible floor produce integers). Same
// checks and messages as the rational path below.
CacResult cac_check_integral(const std::vector<int64_t>& z, const CategorySplit& split,
                             const AvailabilityDraw& u, const Scenario& sc) {
    auto fail = [](std::string msg) {
        CacResult r;
        r.ok = false;
        r.violation = std::move(msg);
        return r;
    };
    const int L = sc.num_categories, N = sc.num_job_types, S = sc.num_skills;
    auto zat = [&](int l, int j, int s) -> int64_t {
        return z[(static_cast<size_t>(l) * N + j) * S + s];
    };
    for (int j = 0; j < N; ++j) {
        for (int s = 0; s < S; ++s) {
            int64_t sum = 0;
            for (int l = 0; l < L; ++l) {
                if (zat(l, j, s) < 0) return fail("negative z at " + idx3(l, j, s));
                sum += zat(l, j, s);
            }
            if (sc.requirement(j, s) == 0) {
                if (sum != 0 || split.count(j, s) != 0)
                    return fail("allocation for nonexistent (j,s)-task at (j=" +
                                std::to_string(j) + ", s=" + std::to_string(s) + ")");
                continue;
            }
            if (sum != split.count(j, s))
                return fail("split does not sum to task count at (j=" + std::to_string(j) +
                            ", s=" + std::to_string(s) + ")");
        }
    }
    for (int l = 0; l < L; ++l)
        for (int j = 0; j < N; ++j)
            if (!sc.graph.has_edge(j, l))
                for (int s = 0; s < S; ++s)
                    if (zat(l, j, s) != 0)
                        return fail("z nonzero off the feasibility graph at " + idx3(l, j, s));
    for (int l = 0; l < L; ++l) {
        for (int s = 0; s < S; ++s) {
            int64_t need = 0, have = 0;
            for (int j = 0; j < N; ++j) need += zat(l, j, s) * sc.requirement(j, s);
            for (int i = 0; i < sc.types_per_category[l]; ++i)
                have += u[l][i] *
                        sc.agent_types[sc.agent_type_index(l, i)].availability[s];
            if (need > have)
                return fail("skill-hours exceeded at (l=" + std::to_string(l) +
                            ", s=" + std::to_string(s) + ")");
        }
    }
    if (!is_decomposable(sc.job_class)) {
        for (int j = 0; j < N; ++j) {
            auto skills = sc.task_skills(j);
            for (size_t k = 1; k < skills.size(); ++k)
                if (split.count(j, skills[k]) != split.count(j, skills[0]))
                    return fail("non-decomposable equality broken at (j=" + std::to_string(j) +
                                ", s=" + std::to_string(skills[k]) + ")");
        }
    }
    if (!is_flexible(sc.job_class)) {
        for (int l = 0; l < L; ++l) {
            for (int j = 0; j < N; ++j) {
                auto skills = sc.task_skills(j);
                if (skills.empty()) continue;
                for (size_t k = 1; k < skills.size(); ++k)
                    if (zat(l, j, skills[k]) != zat(l, j, skills[0]))
                        return fail("inflexible split differs across skills at " +
                                    idx3(l, j, skills[k]));
            }
        }
    }
    return {};
}

} // namespace

CacResult cac_check(const CategorySplit& split, const AvailabilityDraw& u, const Scenario& sc) {
    if (split.num_categories != sc.num_categories || split.num_jobs != sc.num_job_types ||
        split.num_skills != sc.num_skills)
        throw std::invalid_argument("cac_check: split dimensions do not match scenario");
    if (static_cast<int>(u.size()) != sc.num_categories)
        throw std::invalid_argument("cac_check: availability dimensions do not match scenario");
    for (int l = 0; l < sc.num_categories; ++l)
        if (static_cast<int>(u[l].size()) != sc.types_per_category[l])
            throw std::invalid_argument("cac_check: availability dimensions do not match scenario");

    {
        std::vector<int64_t> zi(split.z.size());
        bool all_integer = true;
        for (size_t k = 0; k < split.z.size() && all_integer; ++k) {
            if (is_integer(split.z[k]))
                zi[k] = numerator(split.z[k]).convert_to<int64_t>();
            else
                all_integer = false;
        }
        if (all_integer) return cac_check_integral(zi, split, u, sc);
    }

    auto fail = [](std::string msg) {
        CacResult r;
        r.ok = false;
        r.violation = std::move(msg);
        return r;
    };

    // Split-sum consistency and nonexistent tasks.
    for (int j = 0; j < sc.num_job_types; ++j) {
        for (int s = 0; s < sc.num_skills; ++s) {
            Rational sum(0);
            for (int l = 0; l < sc.num_categories; ++l) {
                if (split.zref(l, j, s) < 0)
                    return fail("negative z at " + idx3(l, j, s));
                sum += split.zref(l, j, s);
            }
            if (sc.requirement(j, s) == 0) {
                if (sum != 0 || split.count(j, s) != 0)
                    return fail("allocation for nonexistent (j,s)-task at (j=" +
                                std::to_string(j) + ", s=" + std::to_string(s) + ")");
                continue;
            }
            if (sum != Rational(split.count(j, s)))
                return fail("split does not sum to task count at (j=" + std::to_string(j) +
                            ", s=" + std::to_string(s) + ")");
        }
    }

    // Graph zeroing.
    for (int l = 0; l < sc.num_categories; ++l)
        for (int j = 0; j < sc.num_job_types; ++j)
            if (!sc.graph.has_edge(j, l))
                for (int s = 0; s < sc.num_skills; ++s)
                    if (split.zref(l, j, s) != 0)
                        return fail("z nonzero off the feasibility graph at " + idx3(l, j, s));

    // Per-(l,s) hour balance against the realized availability.
    for (int l = 0; l < sc.num_categories; ++l) {
        for (int s = 0; s < sc.num_skills; ++s) {
            Rational need(0);
            for (int j = 0; j < sc.num_job_types; ++j)
                need += split.zref(l, j, s) * Rational(sc.requirement(j, s));
            if (need > category_hours(u, sc, l, s))
                return fail("skill-hours exceeded at (l=" + std::to_string(l) +
                            ", s=" + std::to_string(s) + ")");
        }
    }

    // Non-decomposable equality across skills.
    if (!is_decomposable(sc.job_class)) {
        for (int j = 0; j < sc.num_job_types; ++j) {
            auto skills = sc.task_skills(j);
            for (size_t k = 1; k < skills.size(); ++k)
                if (split.count(j, skills[k]) != split.count(j, skills[0]))
                    return fail("non-decomposable equality broken at (j=" + std::to_string(j) +
                                ", s=" + std::to_string(skills[k]) + ")");
        }
    }

    // Inflexible integrality and per-category equality across skills.
    if (!is_flexible(sc.job_class)) {
        for (int l = 0; l < sc.num_categories; ++l) {
            for (int j = 0; j < sc.num_job_types; ++j) {
                auto skills = sc.task_skills(j);
                if (skills.empty()) continue;
                const Rational& first = split.zref(l, j, skills[0]);
                if (!is_integer(first))
                    return fail("inflexible split not integral at " + idx3(l, j, skills[0]));
                for (size_t k = 1; k < skills.size(); ++k)
                    if (split.zref(l, j, skills[k]) != first)
                        return fail("inflexible split differs across skills at " +
                                    idx3(l, j, skills[k]));
            }
        }
    }
    return {};
}

OuterVerdict outer_region_check(const RatePoint& rates, const Scenario& sc) {
    if (static_cast<int>(rates.rates.size()) != sc.num_job_types)
        throw std::invalid_argument("rate point dimension mismatch");
    auto mu = mean_availability(sc);

    for (int s = 0; s < sc.num_skills; ++s) {
        // Supplies lambda_j r_{j,s}, sinks of capacity sum_i mu^l_i h^l_{i,s};
        // clear denominators so the flow is exact.
        std::vector<Rational> supply(sc.num_job_types), cap(sc.num_categories, Rational(0));
        BigInt denom = 1;
        for (int j = 0; j < sc.num_job_types; ++j) {
            supply[j] = rates.rates[j] * Rational(sc.requirement(j, s));
            denom = boost::multiprecision::lcm(denom, denominator(supply[j]));
        }
        for (int l = 0; l < sc.num_categories; ++l) {
            for (int i = 0; i < sc.types_per_category[l]; ++i) {
                int t = sc.agent_type_index(l, i);
                cap[l] += mu[t] * Rational(sc.agent_types[t].availability[s]);
            }
            denom = boost::multiprecision::lcm(denom, denominator(cap[l]));
        }

        const int source = 0;
        const int sink = 1 + sc.num_job_types + sc.num_categories;
        MaxFlow mf(sink + 1);
        std::vector<BigInt> supply_units(sc.num_job_types), cap_units(sc.num_categories);
        BigInt total_supply = 0, infinite = 1;
        for (int j = 0; j < sc.num_job_types; ++j) {
            supply_units[j] = numerator(supply[j] * Rational(denom));
            total_supply += supply_units[j];
        }
        for (int l = 0; l < sc.num_categories; ++l) {
            cap_units[l] = numerator(cap[l] * Rational(denom));
            infinite += cap_units[l];
        }
        infinite += total_supply; // exceeds every finite cut
        for (int j = 0; j < sc.num_job_types; ++j) {
            mf.add_edge(source, 1 + j, supply_units[j]);
            for (int l : sc.graph.job_neighbors(j))
                mf.add_edge(1 + j, 1 + sc.num_job_types + l, infinite);
        }
        for (int l = 0; l < sc.num_categories; ++l)
            mf.add_edge(1 + sc.num_job_types + l, sink, cap_units[l]);

        if (mf.run(source, sink) == total_supply) continue;

        OuterVerdict v;
        v.inside = false;
        v.witness_skill = s;
        auto cut = mf.reachable(source);
        for (int j = 0; j < sc.num_job_types; ++j)
            if (cut[1 + j]) v.witness_jobs.insert(j);
        // Re-substitute the witness exactly before returning it.
        Rational lhs(0), rhs(0);
        for (int j : v.witness_jobs) lhs += supply[j];
        for (int l : neighbors(sc.graph, v.witness_jobs)) rhs += cap[l];
        if (!(lhs > rhs)) throw std::logic_error("outer-region witness failed re-substitution");
        return v;
    }
    return {};
}

namespace {

// Exact phase-1 simplex over rationals: find x >= 0 with A x (<=|==) b.
// Small systems only; used where a verdict must not flip due to rounding.
struct ExactRow {
    std::vector<Rational> a;
    bool equality = false;
    Rational b;
};

std::optional<std::vector<Rational>> exact_feasible(int n, std::vector<ExactRow> rows) {
    // Normalize to equalities with slacks, b >= 0, artificial basis.
    int m = static_cast<int>(rows.size());
    int slacks = 0;
    for (const auto& r : rows)
        if (!r.equality) ++slacks;
    int cols = n + slacks + m; // + artificials, one per row
    std::vector<std::vector<Rational>> T(m + 1, std::vector<Rational>(cols + 1, Rational(0)));
    std::vector<int> basis(m);

    int sk = 0;
    for (int i = 0; i < m; ++i) {
        Rational sign = rows[i].b < 0 ? Rational(-1) : Rational(1);
        for (int j = 0; j < n; ++j) T[i][j] = sign * rows[i].a[j];
        if (!rows[i].equality) {
            T[i][n + sk] = sign;
            ++sk;
        }
        T[i][n + slacks + i] = 1;
        T[i][cols] = sign * rows[i].b;
        basis[i] = n + slacks + i;
    }
    // Objective: minimize sum of artificials -> maximize -(sum); reduced-cost
    // row starts as sum of the artificial rows (positive entries improve).
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= cols; ++j) T[m][j] += T[i][j];
    for (int i = 0; i < m; ++i) T[m][n + slacks + i] = 0;

    for (;;) {
        int enter = -1;
        for (int j = 0; j < n + slacks; ++j) { // Bland
            if (T[m][j] > 0) {
                enter = j;
                break;
            }
        }
        if (enter < 0) break;
        int leave = -1;
        Rational best;
        for (int i = 0; i < m; ++i) {
            if (T[i][enter] > 0) {
                Rational ratio = T[i][cols] / T[i][enter];
                if (leave < 0 || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                    best = ratio;
                    leave = i;
                }
            }
        }
        if (leave < 0) break; // cannot happen for a bounded phase-1 objective
        Rational piv = T[leave][enter];
        for (int j = 0; j <= cols; ++j) T[leave][j] /= piv;
        for (int i = 0; i <= m; ++i) {
            if (i == leave) continue;
            Rational f = T[i][enter];
            if (f == 0) continue;
            for (int j = 0; j <= cols; ++j) T[i][j] -= f * T[leave][j];
        }
        basis[leave] = enter;
    }

    if (T[m][cols] != 0) return std::nullopt; // artificial mass left
    std::vector<Rational> x(n, Rational(0));
    for (int i = 0; i < m; ++i)
        if (basis[i] < n) x[basis[i]] = T[i][cols];
    return x;
}

} // namespace

InflexVerdict inflexible_outer_check(const RatePoint& rates, const Scenario& sc) {
    if (is_flexible(sc.job_class))
        throw std::invalid_argument("inflexible_outer_check requires an ID or IND scenario");
    if (static_cast<int>(rates.rates.size()) != sc.num_job_types)
        throw std::invalid_argument("rate point dimension mismatch");

    const int L = sc.num_categories, N = sc.num_job_types;
    auto mu = mean_availability(sc);
    auto var = [N](int l, int j) { return l * N + j; };

    std::vector<ExactRow> rows;
    for (int j = 0; j < N; ++j) {
        ExactRow r;
        r.a.assign(L * N, Rational(0));
        for (int l = 0; l < L; ++l) r.a[var(l, j)] = 1;
        r.equality = true;
        r.b = rates.rates[j];
        rows.push_back(std::move(r));
    }
    for (int l = 0; l < L; ++l) {
        for (int s = 0; s < sc.num_skills; ++s) {
            ExactRow r;
            r.a.assign(L * N, Rational(0));
            for (int j = 0; j < N; ++j) r.a[var(l, j)] = Rational(sc.requirement(j, s));
            for (int i = 0; i < sc.types_per_category[l]; ++i) {
                int t = sc.agent_type_index(l, i);
                r.b += mu[t] * Rational(sc.agent_types[t].availability[s]);
            }
            rows.push_back(std::move(r));
        }
    }

    InflexVerdict v;
    auto x = exact_feasible(L * N, std::move(rows));
    if (!x) return v;
    v.inside = true;
    v.decomposition.assign(L, std::vector<Rational>(N, Rational(0)));
    for (int l = 0; l < L; ++l)
        for (int j = 0; j < N; ++j) v.decomposition[l][j] = (*x)[var(l, j)];
    return v;
}

} // namespace crowdcap
