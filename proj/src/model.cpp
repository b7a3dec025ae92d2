#include "crowdcap/model.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace crowdcap {

const char* to_string(SystemClass c) {
    switch (c) {
    case SystemClass::FD: return "FD";
    case SystemClass::FND: return "FND";
    case SystemClass::ID: return "ID";
    case SystemClass::IND: return "IND";
    }
    return "?";
}

SystemClass parse_system_class(const std::string& s) {
    if (s == "FD") return SystemClass::FD;
    if (s == "FND") return SystemClass::FND;
    if (s == "ID") return SystemClass::ID;
    if (s == "IND") return SystemClass::IND;
    throw std::invalid_argument("unknown system class: " + s);
}

bool FeasibilityGraph::has_edge(int j, int l) const {
    return std::find(edges.begin(), edges.end(), std::make_pair(j, l)) != edges.end();
}

std::vector<int> FeasibilityGraph::job_neighbors(int j) const {
    std::vector<int> out;
    for (const auto& [ej, el] : edges)
        if (ej == j) out.push_back(el);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::set<int> neighbors(const FeasibilityGraph& g, const std::set<int>& jobs) {
    std::set<int> out;
    for (const auto& [j, l] : g.edges)
        if (jobs.count(j)) out.insert(l);
    return out;
}

DistributionSpec DistributionSpec::constant(int64_t v) {
    DistributionSpec d;
    d.kind = Kind::Constant;
    d.value = v;
    return d;
}

DistributionSpec DistributionSpec::poisson(Rational mean) {
    DistributionSpec d;
    d.kind = Kind::Poisson;
    d.mean = std::move(mean);
    return d;
}

DistributionSpec DistributionSpec::binomial(int64_t n, Rational p) {
    DistributionSpec d;
    d.kind = Kind::Binomial;
    d.trials = n;
    d.prob = std::move(p);
    return d;
}

DistributionSpec DistributionSpec::categorical(std::vector<std::vector<int64_t>> support,
                                               std::vector<Rational> weights) {
    DistributionSpec d;
    d.kind = Kind::Categorical;
    d.support = std::move(support);
    d.weights = std::move(weights);
    return d;
}

std::vector<Rational> mean_of(const DistributionSpec& d) {
    switch (d.kind) {
    case DistributionSpec::Kind::Constant:
        return {d.value};
    case DistributionSpec::Kind::Poisson:
        return {d.mean};
    case DistributionSpec::Kind::Binomial:
        return {Rational(d.trials) * d.prob};
    case DistributionSpec::Kind::Categorical: {
        std::vector<Rational> m(d.dimension(), Rational(0));
        for (size_t k = 0; k < d.support.size(); ++k)
            for (size_t c = 0; c < m.size(); ++c)
                m[c] += d.weights[k] * Rational(d.support[k][c]);
        return m;
    }
    }
    throw std::logic_error("unreachable");
}

int Scenario::agent_type_index(int l, int i) const { return category_offset(l) + i; }

int Scenario::category_offset(int l) const {
    int off = 0;
    for (int k = 0; k < l; ++k) off += types_per_category[k];
    return off;
}

std::vector<int> Scenario::task_skills(int j) const {
    std::vector<int> out;
    for (int s = 0; s < num_skills; ++s)
        if (job_types[j].requirement[s] > 0) out.push_back(s);
    return out;
}

namespace {

void check_distribution(const DistributionSpec& d, const std::string& path,
                        std::vector<std::string>& out) {
    using Kind = DistributionSpec::Kind;
    switch (d.kind) {
    case Kind::Constant:
        if (d.value < 0 || !is_integer(d.value))
            out.push_back(path + ": constant value must be a non-negative integer");
        break;
    case Kind::Poisson:
        if (d.mean < 0) out.push_back(path + ": poisson mean must be >= 0");
        break;
    case Kind::Binomial:
        if (d.trials < 0) out.push_back(path + ": binomial n must be >= 0");
        if (d.prob < 0 || d.prob > 1) out.push_back(path + ": binomial p must be in [0,1]");
        break;
    case Kind::Categorical: {
        if (d.support.empty()) {
            out.push_back(path + ": categorical support is empty");
            break;
        }
        if (d.weights.size() != d.support.size())
            out.push_back(path + ": categorical weights/support size mismatch");
        size_t dim = d.support.front().size();
        for (const auto& row : d.support) {
            if (row.size() != dim) out.push_back(path + ": categorical support rows differ in length");
            for (int64_t v : row)
                if (v < 0) out.push_back(path + ": categorical support entries must be >= 0");
        }
        Rational sum(0);
        for (const auto& w : d.weights) {
            if (w < 0) out.push_back(path + ": categorical weights must be >= 0");
            sum += w;
        }
        Rational diff = sum - 1;
        if (diff < 0) diff = -diff;
        if (diff * 1000000000 > 1)
            out.push_back(path + ": categorical weights must sum to 1 (within 1e-9)");
        break;
    }
    }
}

} // namespace

std::vector<std::string> validate_scenario(const Scenario& s) {
    std::vector<std::string> v;
    auto at = [](const std::string& base, int idx) {
        std::ostringstream os;
        os << base << "[" << idx << "]";
        return os.str();
    };

    if (s.num_job_types <= 0) v.push_back("N: must be positive");
    if (s.num_categories <= 0) v.push_back("L: must be positive");
    if (s.num_skills <= 0) v.push_back("S: must be positive");
    if (s.horizon < 0) v.push_back("horizon: must be >= 0");
    if (static_cast<int>(s.types_per_category.size()) != s.num_categories)
        v.push_back("M: must list one entry per category");
    for (size_t l = 0; l < s.types_per_category.size(); ++l)
        if (s.types_per_category[l] <= 0) v.push_back(at("M", (int)l) + ": must be positive");
    if (!v.empty()) return v; // dimensions broken; deeper checks would misindex

    if (static_cast<int>(s.job_types.size()) != s.num_job_types)
        v.push_back("job_types: size must equal N");
    int total_types = std::accumulate(s.types_per_category.begin(), s.types_per_category.end(), 0);
    if (static_cast<int>(s.agent_types.size()) != total_types)
        v.push_back("agent_types: size must equal sum of M");
    if (!v.empty()) return v;

    for (int j = 0; j < s.num_job_types; ++j) {
        const auto& jt = s.job_types[j];
        if (static_cast<int>(jt.requirement.size()) != s.num_skills) {
            v.push_back(at("job_types", j) + ".requirement: length must equal S");
            continue;
        }
        bool any = false;
        for (int sk = 0; sk < s.num_skills; ++sk) {
            if (jt.requirement[sk] < 0)
                v.push_back(at("job_types", j) + ".requirement: entries must be >= 0");
            any = any || jt.requirement[sk] > 0;
        }
        if (!any) v.push_back(at("job_types", j) + ": job type has no tasks");
    }

    {
        int flat = 0;
        for (int l = 0; l < s.num_categories; ++l) {
            for (int i = 0; i < s.types_per_category[l]; ++i, ++flat) {
                const auto& a = s.agent_types[flat];
                if (a.category != l || a.type_in_category != i)
                    v.push_back(at("agent_types", flat) + ": category/type index out of order");
                if (static_cast<int>(a.availability.size()) != s.num_skills) {
                    v.push_back(at("agent_types", flat) + ".availability: length must equal S");
                    continue;
                }
                for (int sk = 0; sk < s.num_skills; ++sk)
                    if (a.availability[sk] < 0)
                        v.push_back(at("agent_types", flat) + ".availability: entries must be >= 0");
            }
        }
    }

    if (s.graph.num_jobs != s.num_job_types || s.graph.num_categories != s.num_categories)
        v.push_back("graph: dimensions must match N and L");
    for (size_t e = 0; e < s.graph.edges.size(); ++e) {
        auto [j, l] = s.graph.edges[e];
        if (j < 0 || j >= s.num_job_types)
            v.push_back(at("graph.edges", (int)e) + ": edge references unknown job type");
        if (l < 0 || l >= s.num_categories)
            v.push_back(at("graph.edges", (int)e) + ": edge references unknown category");
    }
    for (int j = 0; j < s.num_job_types; ++j)
        if (s.graph.job_neighbors(j).empty())
            v.push_back(at("job_types", j) + ": no neighboring category in graph");
    if (s.num_categories == 1) {
        for (int j = 0; j < s.num_job_types; ++j)
            if (!s.graph.has_edge(j, 0))
                v.push_back(at("job_types", j) + ": single-category scenarios need the complete graph");
    }

    if (static_cast<int>(s.arrival_dists.size()) != s.num_job_types)
        v.push_back("arrival_dists: one spec per job type required");
    for (size_t j = 0; j < s.arrival_dists.size(); ++j) {
        check_distribution(s.arrival_dists[j], at("arrival_dists", (int)j), v);
        if (s.arrival_dists[j].dimension() != 1)
            v.push_back(at("arrival_dists", (int)j) + ": arrival law must be scalar");
    }

    if (static_cast<int>(s.availability_dists.size()) != total_types)
        v.push_back("availability_dists: one spec per agent type required");
    else {
        for (size_t t = 0; t < s.availability_dists.size(); ++t)
            check_distribution(s.availability_dists[t], at("availability_dists", (int)t), v);
        // Vector-valued categorical specs describe the joint availability of a
        // whole category; all types of the category must share the same spec and
        // the row length must equal M^l.
        for (int l = 0; l < s.num_categories; ++l) {
            int off = s.category_offset(l);
            int m = s.types_per_category[l];
            for (int i = 0; i < m; ++i) {
                const auto& d = s.availability_dists[off + i];
                if (d.dimension() == 1) continue;
                if (d.dimension() != m)
                    v.push_back(at("availability_dists", off + i) +
                                ": joint categorical dimension must equal M of its category");
                if (!(d == s.availability_dists[off]))
                    v.push_back(at("availability_dists", off + i) +
                                ": joint categorical must be shared by every type in the category");
            }
        }
    }

    if (s.admission_nu && *s.admission_nu <= 0)
        v.push_back("admission_nu: must be > 0 when present");
    if (s.admission_variant != 1 && s.admission_variant != 2)
        v.push_back("admission_variant: must be 1 or 2");
    if (s.policy) {
        static const std::vector<std::string> known = {"mwta", "greedy-agent", "greedy-job",
                                                       "jltt-mwta", "ijltt-greedyjob"};
        if (std::find(known.begin(), known.end(), s.policy->id) == known.end())
            v.push_back("policy.id: unknown policy '" + s.policy->id + "'");
        static const std::vector<std::string> picks = {"fifo", "random-job", "adversarial"};
        if (std::find(picks.begin(), picks.end(), s.policy->task_pick) == picks.end())
            v.push_back("policy.task_pick: unknown mode '" + s.policy->task_pick + "'");
        if (s.policy->node_budget <= 0) v.push_back("policy.node_budget: must be positive");
    }
    return v;
}

std::vector<Rational> mean_availability(const Scenario& s) {
    std::vector<Rational> mu(s.agent_types.size(), Rational(0));
    for (int l = 0; l < s.num_categories; ++l) {
        int off = s.category_offset(l);
        int m = s.types_per_category[l];
        for (int i = 0; i < m; ++i) {
            const auto& d = s.availability_dists[off + i];
            auto mv = mean_of(d);
            mu[off + i] = d.dimension() == 1 ? mv[0] : mv[i];
        }
    }
    return mu;
}

std::vector<Rational> mean_arrivals(const Scenario& s) {
    std::vector<Rational> lam(s.num_job_types, Rational(0));
    for (int j = 0; j < s.num_job_types; ++j) lam[j] = mean_of(s.arrival_dists[j])[0];
    return lam;
}

} // namespace crowdcap
