#include "crowdcap/sim.hpp"

#include "crowdcap/admission.hpp"
#include "crowdcap/rng.hpp"
#include "crowdcap/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <ostream>
#include <sstream>

namespace crowdcap {

namespace {

std::string where(int p, int j, int s) {
    std::ostringstream os;
    os << "(pool=" << p << ", j=" << j << ", s=" << s << ")";
    return os.str();
}

} // namespace

SimRun run(const Scenario& sc, Policy& policy, const RunConfig& cfg) {
    const int pools = policy.pools();
    const int N = sc.num_job_types, S = sc.num_skills;

    SimRun out;
    out.policy_id = policy.id();
    out.admission = cfg.admission;
    out.seed = cfg.seed;
    out.horizon = cfg.horizon;
    out.records.reserve(static_cast<size_t>(std::max<int64_t>(cfg.horizon, 0)));
    out.offered_by_type.assign(N, 0);
    out.accepted_by_type.assign(N, 0);
    out.departed_jobs_by_type.assign(N, 0);

    QueueState q(pools, N, S);
    std::vector<std::vector<int64_t>> cum_accepted(pools, std::vector<int64_t>(N, 0));
    std::vector<std::vector<std::vector<int64_t>>> cum_departed(
        pools, std::vector<std::vector<int64_t>>(N, std::vector<int64_t>(S, 0)));
    std::vector<std::vector<int64_t>> jobs_done(pools, std::vector<int64_t>(N, 0));

    const bool nd = !is_decomposable(sc.job_class);

    for (int64_t t = 0; t < cfg.horizon; ++t) {
        EpochDraw draw = sample_epoch(sc, cfg.seed, t);

        double beta = 0.0;
        std::vector<int64_t> accepted = draw.arrivals;
        if (cfg.admission) {
            beta = compute_beta(draw.arrivals, q, *cfg.admission, sc);
            accepted = admit(draw.arrivals, beta, cfg.seed, t);
        }

        AllocationPlan plan = policy.step(q, accepted, draw.availability, cfg.seed, t);

        // Plan audits: CAC for the realized availability, routing consistency,
        // departure bounds, class shape.
        auto cac = cac_check(plan.split, draw.availability, sc);
        if (!cac.ok) throw SimInvariantError("plan violates CAC at epoch " + std::to_string(t) +
                                             ": " + cac.violation);
        if (static_cast<int>(plan.routed_arrivals.size()) != pools ||
            static_cast<int>(plan.departures.size()) != pools)
            throw SimInvariantError("plan pool dimensions mismatch");
        for (int j = 0; j < N; ++j) {
            int64_t routed = 0;
            for (int p = 0; p < pools; ++p) routed += plan.routed_arrivals[p][j];
            if (routed != accepted[j])
                throw SimInvariantError("routing does not conserve accepted arrivals at j=" +
                                        std::to_string(j));
            if (pools == sc.num_categories && pools > 1) {
                // Pool-per-category policies may not route off the graph.
                for (int p = 0; p < pools; ++p)
                    if (plan.routed_arrivals[p][j] != 0 && !sc.graph.has_edge(j, p))
                        throw SimInvariantError("arrivals routed off the feasibility graph at j=" +
                                                std::to_string(j));
            }
        }
        for (int p = 0; p < pools; ++p)
            for (int j = 0; j < N; ++j) {
                for (int s = 0; s < S; ++s) {
                    int64_t d = plan.departures[p][j][s];
                    if (d < 0) throw SimInvariantError("negative departures at " + where(p, j, s));
                    if (sc.requirement(j, s) == 0) {
                        if (d != 0)
                            throw SimInvariantError("departure for nonexistent task at " +
                                                    where(p, j, s));
                        continue;
                    }
                    if (d > q.at(p, j, s) + plan.routed_arrivals[p][j])
                        throw SimInvariantError("departures exceed Q + A at " + where(p, j, s));
                }
                if (nd) {
                    auto skills = sc.task_skills(j);
                    for (size_t k = 1; k < skills.size(); ++k)
                        if (plan.departures[p][j][skills[k]] != plan.departures[p][j][skills[0]])
                            throw SimInvariantError(
                                "non-decomposable departures differ across skills at j=" +
                                std::to_string(j));
                }
            }

        // Queue update: Q <- Q + A 1(r>0) - D, then the conservation audit.
        EpochRecord rec;
        rec.t = t;
        rec.job_backlog.assign(N, 0);
        rec.pool_backlog.assign(pools, 0);
        for (int p = 0; p < pools; ++p) {
            for (int j = 0; j < N; ++j) {
                cum_accepted[p][j] += plan.routed_arrivals[p][j];
                for (int s : sc.task_skills(j)) {
                    int64_t d = plan.departures[p][j][s];
                    q.at(p, j, s) += plan.routed_arrivals[p][j] - d;
                    if (q.at(p, j, s) < 0)
                        throw SimInvariantError("negative queue at " + where(p, j, s));
                    cum_departed[p][j][s] += d;
                    if (cum_accepted[p][j] - cum_departed[p][j][s] != q.at(p, j, s))
                        throw SimInvariantError("conservation audit failed at " + where(p, j, s));
                    rec.departed_tasks += d;
                    rec.pool_backlog[p] += q.at(p, j, s);
                }
                // A job instance has departed once every task skill's FIFO
                // cursor passed it; per-(j,s) departures are FIFO within type.
                auto skills = sc.task_skills(j);
                int64_t done = cum_departed[p][j][skills[0]];
                for (size_t k = 1; k < skills.size(); ++k)
                    done = std::min(done, cum_departed[p][j][skills[k]]);
                if (done < jobs_done[p][j])
                    throw SimInvariantError("job departures regressed at pool " +
                                            std::to_string(p));
                rec.departed_jobs += done - jobs_done[p][j];
                out.departed_jobs_by_type[j] += done - jobs_done[p][j];
                jobs_done[p][j] = done;
                rec.job_backlog[j] += cum_accepted[p][j] - done;
            }
        }
        rec.total_backlog = q.total();
        rec.beta = beta;
        for (int j = 0; j < N; ++j) {
            rec.offered += draw.arrivals[j];
            rec.accepted += accepted[j];
            out.offered_by_type[j] += draw.arrivals[j];
            out.accepted_by_type[j] += accepted[j];
        }
        for (int s = 0; s < S; ++s) rec.wasted_hours += to_double(plan.wasted_hours[s]);
        ++out.audited_epochs;
        out.records.push_back(std::move(rec));
    }

    out.final_queues = q;
    return out;
}

const char* to_string(StabilityVerdict::Class c) {
    switch (c) {
    case StabilityVerdict::Class::Bounded: return "bounded";
    case StabilityVerdict::Class::Growing: return "growing";
    case StabilityVerdict::Class::Inconclusive: return "inconclusive";
    }
    return "?";
}

double default_slope_tol(const Scenario& sc) {
    auto lam = mean_arrivals(sc);
    double tasks = 0.0;
    for (int j = 0; j < sc.num_job_types; ++j)
        tasks += to_double(lam[j]) * static_cast<double>(sc.task_skills(j).size());
    return 0.01 * tasks;
}

StabilityVerdict stability_diagnostic(const SimRun& run, double slope_tol) {
    StabilityVerdict v;
    if (run.records.empty()) return v;
    const size_t start = run.records.size() / 2; // burn-in = T/2
    const size_t n = run.records.size() - start;
    if (n < 2) return v;

    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (size_t i = start; i < run.records.size(); ++i) {
        double x = static_cast<double>(run.records[i].t);
        double y = static_cast<double>(run.records[i].total_backlog);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    double dn = static_cast<double>(n);
    double varx = sxx - sx * sx / dn;
    double vary = syy - sy * sy / dn;
    double cov = sxy - sx * sy / dn;
    v.slope = varx > 0 ? cov / varx : 0.0;
    v.r2 = vary > 0 ? (cov * cov) / (varx * vary) : 1.0; // flat line fits itself

    if (std::fabs(v.slope) <= slope_tol)
        v.verdict = StabilityVerdict::Class::Bounded;
    else if (v.slope > 10.0 * slope_tol && v.r2 >= 0.8)
        v.verdict = StabilityVerdict::Class::Growing;
    else
        v.verdict = StabilityVerdict::Class::Inconclusive;
    return v;
}

Scenario scale_arrivals(const Scenario& sc, double factor) {
    if (factor < 0) throw std::invalid_argument("load factor must be >= 0");
    Rational f = rational_from_double(factor);
    Scenario scaled = sc;
    for (auto& d : scaled.arrival_dists) {
        switch (d.kind) {
        case DistributionSpec::Kind::Poisson:
            d.mean *= f;
            break;
        case DistributionSpec::Kind::Binomial:
            d.prob *= f;
            if (d.prob > 1)
                throw std::invalid_argument("scaled binomial p exceeds 1; pick another base law");
            break;
        case DistributionSpec::Kind::Constant: {
            Rational v = d.value * f;
            if (!is_integer(v))
                throw std::invalid_argument("scaled constant arrival is not an integer");
            d.value = v;
            break;
        }
        case DistributionSpec::Kind::Categorical: {
            for (auto& row : d.support)
                for (auto& val : row) {
                    Rational v = Rational(val) * f;
                    if (!is_integer(v))
                        throw std::invalid_argument(
                            "scaled categorical support value is not an integer");
                    val = to_int64(v);
                }
            break;
        }
        }
    }
    return scaled;
}

SweepResult sweep(const Scenario& sc, const PolicySpec& policy_spec,
                  const std::vector<double>& factors, int replicas, int64_t horizon) {
    SweepResult result;
    if (factors.empty() || replicas <= 0) return result;

    struct Task {
        double factor;
        int factor_idx;
        int replica;
    };
    std::vector<Task> tasks;
    for (size_t f = 0; f < factors.size(); ++f)
        for (int r = 0; r < replicas; ++r)
            tasks.push_back({factors[f], static_cast<int>(f), r});

    std::vector<std::future<SweepRow>> futures;
    futures.reserve(tasks.size());
    for (const auto& task : tasks) {
        futures.push_back(std::async(std::launch::async, [&sc, &policy_spec, horizon, task]() {
            Scenario scaled = scale_arrivals(sc, task.factor);
            auto policy = make_policy(policy_spec, scaled);
            RunConfig cfg;
            cfg.horizon = horizon;
            cfg.seed = derive_seed(sc.seed, static_cast<uint64_t>(task.factor_idx),
                                   static_cast<uint64_t>(task.replica));
            SimRun r = run(scaled, *policy, cfg);
            SweepRow row;
            row.factor = task.factor;
            row.replica = task.replica;
            row.seed = cfg.seed;
            row.verdict = stability_diagnostic(r, default_slope_tol(scaled));
            double acc = 0.0;
            size_t start = r.records.size() / 2, n = r.records.size() - start;
            for (size_t i = start; i < r.records.size(); ++i)
                acc += static_cast<double>(r.records[i].total_backlog);
            row.mean_backlog = n > 0 ? acc / static_cast<double>(n) : 0.0;
            return row;
        }));
    }
    for (auto& f : futures) result.rows.push_back(f.get());

    // Mean backlog (averaged over replicas) should not decrease with load.
    double prev = -1.0;
    for (size_t f = 0; f < factors.size(); ++f) {
        double mean = 0.0;
        for (int r = 0; r < replicas; ++r) mean += result.rows[f * replicas + r].mean_backlog;
        mean /= replicas;
        if (mean + 1e-9 < prev) result.backlog_monotone = false;
        prev = mean;
    }
    return result;
}

namespace {

void put_double(std::ostream& os, double v) {
    char buf[64];
    snprintf(buf, sizeof buf, "%.12g", v);
    os << buf;
}

} // namespace

void write_run_csv(std::ostream& os, const SimRun& run, const Scenario& sc) {
    os << "t,total_backlog";
    for (int j = 0; j < sc.num_job_types; ++j) os << ",backlog_type_" << j;
    for (int p = 0; p < (run.final_queues.pools ? run.final_queues.pools : 1); ++p)
        os << ",pool_backlog_" << p;
    os << ",departed_tasks,departed_jobs,offered_total,accepted_total,beta,wasted_hours\n";
    for (const auto& r : run.records) {
        os << r.t << ',' << r.total_backlog;
        for (int64_t b : r.job_backlog) os << ',' << b;
        for (int64_t b : r.pool_backlog) os << ',' << b;
        os << ',' << r.departed_tasks << ',' << r.departed_jobs << ',' << r.offered << ','
           << r.accepted << ',';
        put_double(os, r.beta);
        os << ',';
        put_double(os, r.wasted_hours);
        os << '\n';
    }
}

void write_sweep_csv(std::ostream& os, const SweepResult& res) {
    os << "factor,replica,seed,verdict,slope,r2,mean_backlog\n";
    for (const auto& row : res.rows) {
        put_double(os, row.factor);
        os << ',' << row.replica << ',' << row.seed << ',' << to_string(row.verdict.verdict)
           << ',';
        put_double(os, row.verdict.slope);
        os << ',';
        put_double(os, row.verdict.r2);
        os << ',';
        put_double(os, row.mean_backlog);
        os << '\n';
    }
}

} // namespace crowdcap
