#pragma once

#include "crowdcap/rational.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace crowdcap {

/// Job classes: flexible/inflexible x decomposable/non-decomposable.
/// Decomposable jobs may have tasks allocated at different epochs; flexible
/// jobs may have tasks (and parts of tasks) spread over agent categories.
enum class SystemClass { FD, FND, ID, IND };

inline bool is_decomposable(SystemClass c) { return c == SystemClass::FD || c == SystemClass::ID; }
inline bool is_flexible(SystemClass c) { return c == SystemClass::FD || c == SystemClass::FND; }

const char* to_string(SystemClass c);
SystemClass parse_system_class(const std::string& s);

/// Hours per skill, one entry per skill index. Used both for job requirements
/// (r_j) and agent availability vectors (h^l_i). Integer hours throughout.
using SkillHourVector = std::vector<int64_t>;

struct JobTypeSpec {
    int id = 0;                  // index j
    SkillHourVector requirement; // r_{j,s}; a (j,s)-task exists iff r_{j,s} > 0
};

struct AgentTypeSpec {
    int category = 0;         // l
    int type_in_category = 0; // i within category
    SkillHourVector availability; // h^l_{i,s}
};

/// Bipartite job-type x category graph. Edge (j,l) present means category l
/// agents can serve type-j jobs.
struct FeasibilityGraph {
    int num_jobs = 0;
    int num_categories = 0;
    std::vector<std::pair<int, int>> edges; // (j, l), zero-based

    bool has_edge(int j, int l) const;
    /// Categories adjacent to job type j.
    std::vector<int> job_neighbors(int j) const;
};

/// N(J): union of categories adjacent to any j in J.
std::set<int> neighbors(const FeasibilityGraph& g, const std::set<int>& jobs);

struct DistributionSpec {
    enum class Kind { Constant, Poisson, Binomial, Categorical };
    Kind kind = Kind::Constant;

    Rational value;   // constant
    Rational mean;    // poisson
    int64_t trials = 0; // binomial n
    Rational prob;      // binomial p

    // categorical: rows of the support (scalars are length-1 rows)
    std::vector<std::vector<int64_t>> support;
    std::vector<Rational> weights;

    int dimension() const {
        return kind == Kind::Categorical && !support.empty()
                   ? static_cast<int>(support.front().size())
                   : 1;
    }

    static DistributionSpec constant(int64_t v);
    static DistributionSpec poisson(Rational mean);
    static DistributionSpec binomial(int64_t n, Rational p);
    static DistributionSpec categorical(std::vector<std::vector<int64_t>> support,
                                        std::vector<Rational> weights);

    bool operator==(const DistributionSpec&) const = default;
};

/// Analytic mean, one coordinate per dimension (scalar kinds have one).
std::vector<Rational> mean_of(const DistributionSpec& d);

/// Solver and scheme selection carried in the scenario "policy" block.
struct PolicySpec {
    std::string id = "mwta"; // mwta | greedy-agent | greedy-job | jltt-mwta | ijltt-greedyjob
    int64_t node_budget = 1'000'000;
    bool use_exact = false;       // multi-category: exact B&B instead of LP+floor
    std::string task_pick = "fifo"; // greedy-agent: fifo | random-job | adversarial

    bool operator==(const PolicySpec&) const = default;
};

struct AdmissionConfig {
    Rational nu;     // > 0
    int variant = 1; // 1 (MWTA) or 2 (JLTT-MWTA)
};

/// Full static system description. Immutable after validation; all runtime
/// state (queues, draws) lives in the engine.
struct Scenario {
    int num_job_types = 0;  // N
    int num_categories = 0; // L
    int num_skills = 0;     // S
    std::vector<int> types_per_category; // M^l

    std::vector<JobTypeSpec> job_types;
    std::vector<AgentTypeSpec> agent_types; // flattened, grouped by category
    FeasibilityGraph graph;
    SystemClass job_class = SystemClass::FD;

    std::vector<DistributionSpec> arrival_dists;      // per job type
    std::vector<DistributionSpec> availability_dists; // per flattened agent type

    int64_t horizon = 0;
    uint64_t seed = 0;
    std::optional<Rational> admission_nu;
    int admission_variant = 1;
    std::optional<PolicySpec> policy;

    int64_t requirement(int j, int s) const { return job_types[j].requirement[s]; }
    int total_agent_types() const { return static_cast<int>(agent_types.size()); }

    /// Flat index of agent type (l, i) into agent_types / availability_dists.
    int agent_type_index(int l, int i) const;
    /// First flat index of category l.
    int category_offset(int l) const;

    /// Skills with r_{j,s} > 0 for job type j.
    std::vector<int> task_skills(int j) const;
};

/// Every invariant violation with a human-readable path; empty means valid.
std::vector<std::string> validate_scenario(const Scenario& s);

/// Exact mean availability per flattened agent type (handles shared
/// per-category joint categorical specs).
std::vector<Rational> mean_availability(const Scenario& s);

/// Exact mean arrivals per job type.
std::vector<Rational> mean_arrivals(const Scenario& s);

} // namespace crowdcap
