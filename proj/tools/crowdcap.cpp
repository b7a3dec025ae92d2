// crowdcap: scenario generation, simulation runs, load sweeps, and region
// checks for skill-based task allocation experiments.

#include "crowdcap/admission.hpp"
#include "crowdcap/capacity.hpp"
#include "crowdcap/instances.hpp"
#include "crowdcap/model.hpp"
#include "crowdcap/scenario_io.hpp"
#include "crowdcap/sim.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace crowdcap;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;    // missing files, schema violations, bad flags
constexpr int kExitInternal = 3; // invariant breach inside a run

int log_level() {
    const char* env = std::getenv("CROWDCAP_LOG");
    if (!env) return 0;
    std::string v(env);
    if (v == "debug") return 2;
    if (v == "info") return 1;
    return 0;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[crowdcap] " << msg << "\n";
}

Scenario load_and_validate(const std::string& path) {
    Scenario sc = load_scenario_file(path);
    auto violations = validate_scenario(sc);
    if (!violations.empty()) {
        std::string msg = "scenario validation failed:";
        for (const auto& v : violations) msg += "\n  - " + v;
        throw ScenarioParseError(msg);
    }
    return sc;
}

std::optional<AdmissionConfig> parse_admission(const std::string& text) {
    if (text.empty()) return std::nullopt;
    AdmissionConfig cfg;
    bool have_nu = false;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        auto eq = part.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("--admission expects nu=FLOAT,variant={I,II}");
        std::string key = part.substr(0, eq), value = part.substr(eq + 1);
        if (key == "nu") {
            cfg.nu = parse_rational(value);
            have_nu = true;
        } else if (key == "variant") {
            if (value == "I")
                cfg.variant = 1;
            else if (value == "II")
                cfg.variant = 2;
            else
                throw std::invalid_argument("admission variant must be I or II");
        } else {
            throw std::invalid_argument("unknown admission key: " + key);
        }
    }
    if (!have_nu || cfg.nu <= 0) throw std::invalid_argument("admission needs nu > 0");
    return cfg;
}

json verdict_json(const StabilityVerdict& v) {
    return {{"class", to_string(v.verdict)}, {"slope", v.slope}, {"r2", v.r2}};
}

json resolved_config(const Scenario& sc, const PolicySpec& policy,
                     const std::optional<AdmissionConfig>& admission, int64_t horizon,
                     uint64_t seed) {
    json cfg;
    cfg["scenario"] = scenario_to_json(sc);
    cfg["policy"] = {{"id", policy.id},
                     {"node_budget", policy.node_budget},
                     {"use_exact", policy.use_exact},
                     {"task_pick", policy.task_pick}};
    if (admission)
        cfg["admission"] = {{"nu", rational_to_string(admission->nu)},
                            {"variant", admission->variant == 1 ? "I" : "II"}};
    else
        cfg["admission"] = nullptr;
    cfg["horizon"] = horizon;
    cfg["seed"] = seed;
    return cfg;
}

struct RunArgs {
    std::string scenario_path, out_dir = ".", policy_id, admission;
    int64_t horizon = -1;
    int64_t seed = -1;
};

int cmd_run(const RunArgs& args) {
    Scenario sc = load_and_validate(args.scenario_path);
    PolicySpec policy = sc.policy.value_or(PolicySpec{});
    if (!args.policy_id.empty()) policy.id = args.policy_id;
    std::optional<AdmissionConfig> admission;
    if (!args.admission.empty()) {
        admission = parse_admission(args.admission);
    } else if (sc.admission_nu) {
        AdmissionConfig cfg;
        cfg.nu = *sc.admission_nu;
        cfg.variant = sc.admission_variant;
        admission = cfg;
    }
    RunConfig cfg;
    cfg.horizon = args.horizon >= 0 ? args.horizon : sc.horizon;
    cfg.seed = args.seed >= 0 ? static_cast<uint64_t>(args.seed) : sc.seed;
    cfg.admission = admission;

    auto policy_impl = make_policy(policy, sc);
    log_info("running " + policy.id + " for " + std::to_string(cfg.horizon) + " epochs");
    SimRun result = run(sc, *policy_impl, cfg);
    auto verdict = stability_diagnostic(result, default_slope_tol(sc));

    std::filesystem::create_directories(args.out_dir);
    std::ofstream csv(args.out_dir + "/run.csv");
    write_run_csv(csv, result, sc);

    double mean_backlog = 0.0, acceptance = 1.0;
    size_t start = result.records.size() / 2, n = result.records.size() - start;
    int64_t offered = 0, accepted = 0;
    for (size_t i = start; i < result.records.size(); ++i)
        mean_backlog += static_cast<double>(result.records[i].total_backlog);
    if (n > 0) mean_backlog /= static_cast<double>(n);
    for (const auto& rec : result.records) {
        offered += rec.offered;
        accepted += rec.accepted;
    }
    if (offered > 0) acceptance = static_cast<double>(accepted) / static_cast<double>(offered);

    json summary;
    summary["config"] = resolved_config(sc, policy, admission, cfg.horizon, cfg.seed);
    summary["verdict"] = verdict_json(verdict);
    summary["mean_backlog"] = mean_backlog;
    summary["acceptance_rate"] = acceptance;
    summary["audited_epochs"] = result.audited_epochs;
    std::ofstream js(args.out_dir + "/summary.json");
    js << summary.dump(2) << "\n";
    std::cout << "verdict=" << to_string(verdict.verdict) << " mean_backlog=" << mean_backlog
              << " acceptance_rate=" << acceptance << "\n";
    return kExitOk;
}

struct SweepArgs {
    std::string scenario_path, out_dir = ".", policy_id, factors = "1.0";
    int replicas = 1;
    int64_t horizon = -1;
};

int cmd_sweep(const SweepArgs& args) {
    Scenario sc = load_and_validate(args.scenario_path);
    PolicySpec policy = sc.policy.value_or(PolicySpec{});
    if (!args.policy_id.empty()) policy.id = args.policy_id;

    std::vector<double> factors;
    std::stringstream ss(args.factors);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) factors.push_back(std::stod(tok));

    int64_t horizon = args.horizon >= 0 ? args.horizon : sc.horizon;
    log_info("sweeping " + std::to_string(factors.size()) + " factors x " +
             std::to_string(args.replicas) + " replicas");
    auto result = sweep(sc, policy, factors, args.replicas, horizon);

    std::filesystem::create_directories(args.out_dir);
    std::ofstream csv(args.out_dir + "/sweep.csv");
    write_sweep_csv(csv, result);
    json summary;
    summary["config"] = resolved_config(sc, policy, std::nullopt, horizon, sc.seed);
    summary["factors"] = factors;
    summary["replicas"] = args.replicas;
    summary["backlog_monotone"] = result.backlog_monotone;
    json rows = json::array();
    for (const auto& row : result.rows)
        rows.push_back({{"factor", row.factor},
                        {"replica", row.replica},
                        {"seed", row.seed},
                        {"verdict", verdict_json(row.verdict)},
                        {"mean_backlog", row.mean_backlog}});
    summary["rows"] = std::move(rows);
    std::ofstream js(args.out_dir + "/sweep.json");
    js << summary.dump(2) << "\n";
    for (const auto& row : result.rows)
        std::cout << "factor=" << row.factor << " replica=" << row.replica
                  << " verdict=" << to_string(row.verdict.verdict)
                  << " mean_backlog=" << row.mean_backlog << "\n";
    return kExitOk;
}

struct CheckArgs {
    std::string scenario_path, out_dir, rates;
};

int cmd_check(const CheckArgs& args) {
    Scenario sc = load_and_validate(args.scenario_path);
    RatePoint pt;
    if (args.rates.empty()) {
        pt.rates = mean_arrivals(sc);
    } else {
        std::stringstream ss(args.rates);
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (!tok.empty()) pt.rates.push_back(parse_rational(tok));
        if (static_cast<int>(pt.rates.size()) != sc.num_job_types)
            throw std::invalid_argument("--rates needs one value per job type");
    }

    json out;
    json rates = json::array();
    for (const auto& r : pt.rates) rates.push_back(rational_to_string(r));
    out["rates"] = std::move(rates);

    auto outer = outer_region_check(pt, sc);
    json c_out;
    c_out["verdict"] = outer.inside ? "inside" : "outside";
    if (!outer.inside) {
        json witness;
        witness["jobs"] = std::vector<int>(outer.witness_jobs.begin(), outer.witness_jobs.end());
        witness["skill"] = outer.witness_skill;
        c_out["witness"] = std::move(witness);
    }
    out["c_out"] = std::move(c_out);

    if (!is_flexible(sc.job_class)) {
        auto inflex = inflexible_outer_check(pt, sc);
        json c_o;
        c_o["verdict"] = inflex.inside ? "inside" : "outside";
        if (inflex.inside) {
            json decomp = json::array();
            for (const auto& row : inflex.decomposition) {
                json r = json::array();
                for (const auto& v : row) r.push_back(rational_to_string(v));
                decomp.push_back(std::move(r));
            }
            c_o["witness"] = {{"decomposition", std::move(decomp)}};
        }
        out["c_o"] = std::move(c_o);
    }

    std::string text = out.dump(2) + "\n";
    std::cout << text;
    if (!args.out_dir.empty()) {
        std::filesystem::create_directories(args.out_dir);
        std::ofstream js(args.out_dir + "/check.json");
        js << text;
    }
    return kExitOk;
}

struct GenerateArgs {
    std::string instance, out = "scenario.json", arrival_kind = "constant";
    InstanceParams params;
};

int cmd_generate(const GenerateArgs& args) {
    InstanceParams p = args.params;
    p.arrival_kind = args.arrival_kind;
    Scenario sc = make_named_instance(args.instance, p);
    auto violations = validate_scenario(sc);
    if (!violations.empty())
        throw std::logic_error("generated scenario failed validation: " + violations.front());
    if (auto dir = std::filesystem::path(args.out).parent_path(); !dir.empty())
        std::filesystem::create_directories(dir);
    save_scenario_file(sc, args.out);
    std::cout << "wrote " << args.out << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"crowd allocation simulator and policy library"};
    app.require_subcommand(1);

    GenerateArgs gen_args;
    auto* gen = app.add_subcommand("generate", "write a named scenario instance");
    gen->add_option("--instance", gen_args.instance,
                    "counterexample_3a | prop5_nd | intro_two_category | symmetric_pools")
        ->required();
    gen->add_option("--out", gen_args.out, "output scenario path");
    gen->add_option("--S", gen_args.params.num_skills, "skill count");
    gen->add_option("--N", gen_args.params.num_job_types, "job type count");
    gen->add_option("--L", gen_args.params.num_categories, "category count");
    gen->add_option("--lambda", gen_args.params.lambda, "arrival rate parameter");
    gen->add_option("--alpha", gen_args.params.alpha, "slack fraction");
    gen->add_option("--load", gen_args.params.load, "load relative to the outer boundary");
    gen->add_option("--arrival", gen_args.arrival_kind, "constant | poisson");
    gen->add_option("--horizon", gen_args.params.horizon, "epochs");
    gen->add_option("--seed", gen_args.params.seed, "rng seed");

    RunArgs run_args;
    auto* runc = app.add_subcommand("run", "simulate one scenario");
    runc->add_option("--scenario", run_args.scenario_path, "scenario JSON path")->required();
    runc->add_option("--policy", run_args.policy_id,
                     "mwta | greedy-agent | greedy-job | jltt-mwta | ijltt-greedyjob");
    runc->add_option("--admission", run_args.admission, "nu=FLOAT,variant={I,II}");
    runc->add_option("--horizon", run_args.horizon, "override scenario horizon");
    runc->add_option("--seed", run_args.seed, "override scenario seed");
    runc->add_option("--out", run_args.out_dir, "output directory");

    SweepArgs sweep_args;
    auto* sweepc = app.add_subcommand("sweep", "run a load-factor sweep");
    sweepc->add_option("--scenario", sweep_args.scenario_path, "scenario JSON path")->required();
    sweepc->add_option("--factors", sweep_args.factors, "comma-separated load factors");
    sweepc->add_option("--replicas", sweep_args.replicas, "replicas per factor");
    sweepc->add_option("--horizon", sweep_args.horizon, "override scenario horizon");
    sweepc->add_option("--policy", sweep_args.policy_id, "policy override");
    sweepc->add_option("--out", sweep_args.out_dir, "output directory");

    CheckArgs check_args;
    auto* checkc = app.add_subcommand("check", "region membership for a rate point");
    checkc->add_option("--scenario", check_args.scenario_path, "scenario JSON path")->required();
    checkc->add_option("--rates", check_args.rates,
                       "comma-separated rates (default: arrival means)");
    checkc->add_option("--out", check_args.out_dir, "also write check.json here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (gen->parsed()) return cmd_generate(gen_args);
        if (runc->parsed()) return cmd_run(run_args);
        if (sweepc->parsed()) return cmd_sweep(sweep_args);
        if (checkc->parsed()) return cmd_check(check_args);
    } catch (const SimInvariantError& e) {
        std::cerr << "internal invariant breach: " << e.what() << "\n";
        return kExitInternal;
    } catch (const ScenarioParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
