#pragma once

#include "crowdcap/model.hpp"
#include "crowdcap/rational.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace crowdcap {

/// Category-level division of tasks: z^l_{j,s} (possibly fractional) and the
/// integral per-(j,s) task counts a_{j,s} they sum to.
struct CategorySplit {
    int num_categories = 0, num_jobs = 0, num_skills = 0;
    std::vector<Rational> z;          // dense (l, j, s)
    std::vector<int64_t> task_counts; // dense (j, s)

    CategorySplit() = default;
    CategorySplit(int L, int N, int S)
        : num_categories(L), num_jobs(N), num_skills(S),
          z(static_cast<size_t>(L) * N * S, Rational(0)),
          task_counts(static_cast<size_t>(N) * S, 0) {}

    Rational& zref(int l, int j, int s) {
        return z[(static_cast<size_t>(l) * num_jobs + j) * num_skills + s];
    }
    const Rational& zref(int l, int j, int s) const {
        return z[(static_cast<size_t>(l) * num_jobs + j) * num_skills + s];
    }
    int64_t& count(int j, int s) { return task_counts[static_cast<size_t>(j) * num_skills + s]; }
    int64_t count(int j, int s) const {
        return task_counts[static_cast<size_t>(j) * num_skills + s];
    }
};

/// Realized availability, [category][type] agent counts.
using AvailabilityDraw = std::vector<std::vector<int64_t>>;

struct CacResult {
    bool ok = true;
    std::string violation; // first violation, with indices
};

/// Verifies the class-specific allocation conditions for the realized u:
/// split-sum consistency, graph zeroing, per-(l,s) hour balance, the
/// non-decomposable equality, and inflexible integrality. Dimension
/// mismatches are usage errors and throw.
CacResult cac_check(const CategorySplit& split, const AvailabilityDraw& u, const Scenario& s);

struct RatePoint {
    std::vector<Rational> rates; // per job type
};

struct OuterVerdict {
    bool inside = true;
    std::set<int> witness_jobs; // violating J when outside
    int witness_skill = -1;
};

/// Mean skill-hour balance over every job subset. Implemented per skill as a
/// transportation feasibility via max-flow (Hall-type equivalence); the
/// returned witness is the job side of a minimum cut and re-verified exactly.
OuterVerdict outer_region_check(const RatePoint& rates, const Scenario& s);

struct InflexVerdict {
    bool inside = false;
    std::vector<std::vector<Rational>> decomposition; // [category][job] when inside
};

/// Per-pool decomposition test for inflexible systems: lambda = sum of
/// per-category rates, each inside its category's single-pool outer region.
/// Exact rational LP feasibility; the witness satisfies its inequalities
/// exactly. Note: the region is implemented exactly as stated, with no
/// (j,l)-edge zeroing on the decomposition (see README).
InflexVerdict inflexible_outer_check(const RatePoint& rates, const Scenario& s);

} // namespace crowdcap
