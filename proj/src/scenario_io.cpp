#include "crowdcap/scenario_io.hpp"

#include <fstream>
#include <limits>

namespace crowdcap {

using nlohmann::json;

namespace {

json rational_to_json(const Rational& r) {
    if (is_integer(r)) {
        BigInt n = numerator(r);
        if (n >= std::numeric_limits<int64_t>::min() && n <= std::numeric_limits<int64_t>::max())
            return n.convert_to<int64_t>();
    }
    return rational_to_string(r);
}

Rational rational_from_json(const json& v, const std::string& path) {
    try {
        if (v.is_number_integer()) return Rational(v.get<int64_t>());
        if (v.is_number_float()) return rational_from_double(v.get<double>());
        if (v.is_string()) return parse_rational(v.get<std::string>());
    } catch (const std::exception& e) {
        throw ScenarioParseError(path + ": " + e.what());
    }
    throw ScenarioParseError(path + ": expected a number or rational string");
}

const json& require(const json& doc, const std::string& key) {
    auto it = doc.find(key);
    if (it == doc.end()) throw ScenarioParseError("missing field: " + key);
    return *it;
}

} // namespace

json distribution_to_json(const DistributionSpec& d) {
    json out;
    switch (d.kind) {
    case DistributionSpec::Kind::Constant:
        out["kind"] = "constant";
        out["value"] = rational_to_json(d.value);
        break;
    case DistributionSpec::Kind::Poisson:
        out["kind"] = "poisson";
        out["mean"] = rational_to_json(d.mean);
        break;
    case DistributionSpec::Kind::Binomial:
        out["kind"] = "binomial";
        out["n"] = d.trials;
        out["p"] = rational_to_json(d.prob);
        break;
    case DistributionSpec::Kind::Categorical: {
        out["kind"] = "categorical";
        json support = json::array();
        for (const auto& row : d.support) {
            if (row.size() == 1)
                support.push_back(row[0]);
            else
                support.push_back(row);
        }
        out["support"] = std::move(support);
        json weights = json::array();
        for (const auto& w : d.weights) weights.push_back(rational_to_json(w));
        out["weights"] = std::move(weights);
        break;
    }
    }
    return out;
}

DistributionSpec distribution_from_json(const json& doc) {
    if (!doc.is_object()) throw ScenarioParseError("distribution must be an object");
    std::string kind = require(doc, "kind").get<std::string>();
    DistributionSpec d;
    if (kind == "constant") {
        d.kind = DistributionSpec::Kind::Constant;
        d.value = rational_from_json(require(doc, "value"), "constant.value");
    } else if (kind == "poisson") {
        d.kind = DistributionSpec::Kind::Poisson;
        d.mean = rational_from_json(require(doc, "mean"), "poisson.mean");
    } else if (kind == "binomial") {
        d.kind = DistributionSpec::Kind::Binomial;
        d.trials = require(doc, "n").get<int64_t>();
        d.prob = rational_from_json(require(doc, "p"), "binomial.p");
    } else if (kind == "categorical") {
        d.kind = DistributionSpec::Kind::Categorical;
        for (const auto& row : require(doc, "support")) {
            if (row.is_array())
                d.support.push_back(row.get<std::vector<int64_t>>());
            else
                d.support.push_back({row.get<int64_t>()});
        }
        for (const auto& w : require(doc, "weights"))
            d.weights.push_back(rational_from_json(w, "categorical.weights"));
    } else {
        throw ScenarioParseError("unknown distribution kind: " + kind);
    }
    return d;
}

json scenario_to_json(const Scenario& s) {
    json out;
    out["N"] = s.num_job_types;
    out["L"] = s.num_categories;
    out["S"] = s.num_skills;
    out["M"] = s.types_per_category;
    out["class"] = to_string(s.job_class);

    json jobs = json::array();
    for (const auto& jt : s.job_types) jobs.push_back({{"requirement", jt.requirement}});
    out["job_types"] = std::move(jobs);

    json agents = json::array();
    for (const auto& at : s.agent_types)
        agents.push_back({{"category", at.category},
                          {"type", at.type_in_category},
                          {"availability", at.availability}});
    out["agent_types"] = std::move(agents);

    json edges = json::array();
    for (const auto& [j, l] : s.graph.edges) edges.push_back({j, l});
    out["edges"] = std::move(edges);

    json arr = json::array();
    for (const auto& d : s.arrival_dists) arr.push_back(distribution_to_json(d));
    out["arrival_dists"] = std::move(arr);
    json avail = json::array();
    for (const auto& d : s.availability_dists) avail.push_back(distribution_to_json(d));
    out["availability_dists"] = std::move(avail);

    out["horizon"] = s.horizon;
    out["seed"] = s.seed;
    if (s.admission_nu) {
        out["admission"] = {{"nu", rational_to_json(*s.admission_nu)},
                            {"variant", s.admission_variant == 1 ? "I" : "II"}};
    }
    if (s.policy) {
        out["policy"] = {{"id", s.policy->id},
                         {"node_budget", s.policy->node_budget},
                         {"use_exact", s.policy->use_exact},
                         {"task_pick", s.policy->task_pick}};
    }
    return out;
}

Scenario scenario_from_json(const json& doc) {
    if (!doc.is_object()) throw ScenarioParseError("scenario document must be an object");
    Scenario s;
    try {
        s.num_job_types = require(doc, "N").get<int>();
        s.num_categories = require(doc, "L").get<int>();
        s.num_skills = require(doc, "S").get<int>();
        s.types_per_category = require(doc, "M").get<std::vector<int>>();
        s.job_class = parse_system_class(require(doc, "class").get<std::string>());

        for (const auto& jt : require(doc, "job_types")) {
            JobTypeSpec spec;
            spec.id = static_cast<int>(s.job_types.size());
            spec.requirement = require(jt, "requirement").get<SkillHourVector>();
            s.job_types.push_back(std::move(spec));
        }
        for (const auto& at : require(doc, "agent_types")) {
            AgentTypeSpec spec;
            spec.category = require(at, "category").get<int>();
            spec.type_in_category = require(at, "type").get<int>();
            spec.availability = require(at, "availability").get<SkillHourVector>();
            s.agent_types.push_back(std::move(spec));
        }
        s.graph.num_jobs = s.num_job_types;
        s.graph.num_categories = s.num_categories;
        for (const auto& e : require(doc, "edges")) {
            if (!e.is_array() || e.size() != 2)
                throw ScenarioParseError("edges entries must be [job, category] pairs");
            s.graph.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
        }
        for (const auto& d : require(doc, "arrival_dists"))
            s.arrival_dists.push_back(distribution_from_json(d));
        for (const auto& d : require(doc, "availability_dists"))
            s.availability_dists.push_back(distribution_from_json(d));

        s.horizon = require(doc, "horizon").get<int64_t>();
        s.seed = require(doc, "seed").get<uint64_t>();

        if (doc.contains("admission") && !doc["admission"].is_null()) {
            const auto& a = doc["admission"];
            s.admission_nu = rational_from_json(require(a, "nu"), "admission.nu");
            std::string variant = a.value("variant", "I");
            if (variant == "I")
                s.admission_variant = 1;
            else if (variant == "II")
                s.admission_variant = 2;
            else
                throw ScenarioParseError("admission.variant must be \"I\" or \"II\"");
        }
        if (doc.contains("policy") && !doc["policy"].is_null()) {
            const auto& p = doc["policy"];
            PolicySpec spec;
            spec.id = require(p, "id").get<std::string>();
            spec.node_budget = p.value("node_budget", spec.node_budget);
            spec.use_exact = p.value("use_exact", spec.use_exact);
            spec.task_pick = p.value("task_pick", spec.task_pick);
            s.policy = std::move(spec);
        }
    } catch (const json::exception& e) {
        throw ScenarioParseError(std::string("malformed scenario: ") + e.what());
    }
    return s;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioParseError("cannot open scenario file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ScenarioParseError(std::string("invalid JSON in ") + path + ": " + e.what());
    }
    return scenario_from_json(doc);
}

void save_scenario_file(const Scenario& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ScenarioParseError("cannot write scenario file: " + path);
    out << scenario_to_json(s).dump(2) << "\n";
}

} // namespace crowdcap
