#include "crowdcap/instances.hpp"

#include <algorithm>
#include <stdexcept>

namespace crowdcap {

namespace {

void complete_graph(Scenario& s) {
    s.graph.num_jobs = s.num_job_types;
    s.graph.num_categories = s.num_categories;
    for (int j = 0; j < s.num_job_types; ++j)
        for (int l = 0; l < s.num_categories; ++l) s.graph.edges.emplace_back(j, l);
}

} // namespace

Scenario counterexample_3a(const std::string& arrival_kind, int64_t lambda, int64_t horizon,
                           uint64_t seed) {
    if (lambda <= 0) throw std::invalid_argument("lambda must be positive");
    Scenario s;
    s.num_job_types = 1;
    s.num_categories = 1;
    s.num_skills = 2;
    s.types_per_category = {2};
    s.job_class = SystemClass::FND;
    s.job_types.push_back({0, {1, 1}});
    s.agent_types.push_back({0, 0, {1, 0}});
    s.agent_types.push_back({0, 1, {0, 1}});
    complete_graph(s);
    if (arrival_kind == "constant")
        s.arrival_dists.push_back(DistributionSpec::constant(lambda));
    else if (arrival_kind == "poisson")
        s.arrival_dists.push_back(DistributionSpec::poisson(Rational(lambda)));
    else
        throw std::invalid_argument("arrival kind must be constant or poisson");
    // Joint availability: all ten hours land on one skill each epoch.
    auto joint = DistributionSpec::categorical({{0, 10}, {10, 0}},
                                               {Rational(1, 2), Rational(1, 2)});
    s.availability_dists = {joint, joint};
    s.horizon = horizon;
    s.seed = seed;
    PolicySpec p;
    p.id = "mwta";
    s.policy = p;
    return s;
}

Scenario prop5_nd(int num_skills, int64_t lambda, double alpha, int64_t horizon, uint64_t seed) {
    if (num_skills <= 0 || num_skills % 2 != 0)
        throw std::invalid_argument("prop5_nd needs an even positive skill count");
    if (lambda < 2) throw std::invalid_argument("prop5_nd needs lambda >= 2");
    if (alpha <= 0.0 || alpha >= 1.0) throw std::invalid_argument("alpha must lie in (0,1)");

    Scenario s;
    s.num_job_types = 1;
    s.num_categories = 1;
    s.num_skills = num_skills;
    s.types_per_category = {2};
    s.job_class = SystemClass::FND;
    s.job_types.push_back({0, SkillHourVector(num_skills, 1)});
    SkillHourVector h1(num_skills, 0), h2(num_skills, 0);
    for (int sk = 0; sk < num_skills / 2; ++sk) h1[sk] = 1;
    for (int sk = num_skills / 2; sk < num_skills; ++sk) h2[sk] = 1;
    s.agent_types.push_back({0, 0, h1});
    s.agent_types.push_back({0, 1, h2});
    complete_graph(s);

    // Two-point law: a sub-mean value almost always, a 2*lambda burst with
    // probability eps = 1/(2*lambda); delta balances the mean at (1-alpha)*lambda.
    Rational eps(1, 2 * lambda);
    Rational a = rational_from_double(alpha);
    Rational delta = (Rational(1) + a) * eps / (Rational(1) - eps);
    Rational low_exact = (Rational(1) - a - delta) * Rational(lambda);
    int64_t low = floor_to_int64(low_exact + Rational(1, 2));
    s.arrival_dists.push_back(DistributionSpec::categorical(
        {{std::max<int64_t>(low, 0)}, {2 * lambda}}, {Rational(1) - eps, eps}));
    s.availability_dists.push_back(DistributionSpec::constant(lambda));
    s.availability_dists.push_back(DistributionSpec::constant(lambda));
    s.horizon = horizon;
    s.seed = seed;
    PolicySpec p;
    p.id = "greedy-agent";
    p.task_pick = "adversarial";
    s.policy = p;
    return s;
}

Scenario intro_two_category(int64_t horizon, uint64_t seed) {
    Scenario s;
    s.num_job_types = 2;
    s.num_categories = 2;
    s.num_skills = 1;
    s.types_per_category = {1, 1};
    s.job_class = SystemClass::FD;
    s.job_types.push_back({0, {1}});
    s.job_types.push_back({1, {1}});
    s.agent_types.push_back({0, 0, {1}});
    s.agent_types.push_back({1, 0, {1}});
    s.graph.num_jobs = 2;
    s.graph.num_categories = 2;
    s.graph.edges = {{0, 0}, {0, 1}, {1, 1}};
    s.arrival_dists.push_back(DistributionSpec::poisson(Rational(3)));
    s.arrival_dists.push_back(DistributionSpec::poisson(Rational(3)));
    s.availability_dists.push_back(DistributionSpec::constant(4));
    s.availability_dists.push_back(DistributionSpec::constant(8));
    s.horizon = horizon;
    s.seed = seed;
    return s;
}

Scenario symmetric_pools(int num_categories, int num_job_types, int num_skills, double load,
                         int64_t horizon, uint64_t seed) {
    if (num_categories <= 0 || num_job_types <= 0 || num_skills <= 0)
        throw std::invalid_argument("symmetric_pools dimensions must be positive");
    if (load <= 0.0) throw std::invalid_argument("load must be positive");

    Scenario s;
    s.num_job_types = num_job_types;
    s.num_categories = num_categories;
    s.num_skills = num_skills;
    s.types_per_category.assign(num_categories, 1);
    s.job_class = SystemClass::IND;

    // Deterministic mildly heterogeneous requirements; every job has at least
    // one task and every skill is used by someone.
    for (int j = 0; j < num_job_types; ++j) {
        SkillHourVector r(num_skills, 0);
        for (int sk = 0; sk < num_skills; ++sk) {
            int v = (j + sk) % 3; // 0, 1, 2 pattern
            r[sk] = v;
        }
        r[j % num_skills] = std::max<int64_t>(r[j % num_skills], 1);
        s.job_types.push_back({j, r});
    }
    SkillHourVector h(num_skills, 2);
    for (int l = 0; l < num_categories; ++l) s.agent_types.push_back({l, 0, h});
    complete_graph(s);

    // Per-pool binomial agent pools, mean 10 agents -> 20 hours per skill.
    const int64_t n_agents = 20;
    const Rational p_avail(1, 2);
    for (int l = 0; l < num_categories; ++l)
        s.availability_dists.push_back(DistributionSpec::binomial(n_agents, p_avail));

    // Boundary of the pool-decomposed outer region for a uniform rate vector:
    // lambda0 * sum_j r_{j,s} <= L * mean-hours(s) for every skill s.
    Rational mean_hours = Rational(n_agents) * p_avail * Rational(h[0]); // 20 per skill
    Rational lambda0;
    bool first = true;
    for (int sk = 0; sk < num_skills; ++sk) {
        int64_t total_r = 0;
        for (int j = 0; j < num_job_types; ++j) total_r += s.job_types[j].requirement[sk];
        if (total_r == 0) continue;
        Rational bound = Rational(num_categories) * mean_hours / Rational(total_r);
        if (first || bound < lambda0) lambda0 = bound;
        first = false;
    }
    Rational rate = lambda0 * rational_from_double(load);
    for (int j = 0; j < num_job_types; ++j)
        s.arrival_dists.push_back(DistributionSpec::poisson(rate));

    s.horizon = horizon;
    s.seed = seed;
    PolicySpec p;
    p.id = "jltt-mwta";
    p.node_budget = 20000;
    s.policy = p;
    return s;
}

Scenario make_named_instance(const std::string& id, const InstanceParams& params) {
    if (id == "counterexample_3a")
        return counterexample_3a(params.arrival_kind, params.lambda, params.horizon, params.seed);
    if (id == "prop5_nd")
        return prop5_nd(params.num_skills, params.lambda, params.alpha, params.horizon,
                        params.seed);
    if (id == "intro_two_category") return intro_two_category(params.horizon, params.seed);
    if (id == "symmetric_pools")
        return symmetric_pools(params.num_categories, params.num_job_types, params.num_skills,
                               params.load, params.horizon, params.seed);
    throw std::invalid_argument("unknown instance id: " + id);
}

} // namespace crowdcap
