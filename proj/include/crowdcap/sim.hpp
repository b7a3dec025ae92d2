#pragma once

#include "crowdcap/model.hpp"
#include "crowdcap/plan.hpp"
#include "crowdcap/policy.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace crowdcap {

/// A policy emitted an invalid plan or an audit failed. This is a bug trap,
/// not a modeled outcome; the CLI maps it to exit code 3.
struct SimInvariantError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EpochRecord {
    int64_t t = 0;
    int64_t total_backlog = 0;          // tasks, after the queue update
    std::vector<int64_t> job_backlog;   // whole jobs per type
    std::vector<int64_t> pool_backlog;  // tasks per pool
    int64_t departed_tasks = 0;
    int64_t departed_jobs = 0;
    int64_t offered = 0;
    int64_t accepted = 0;
    double beta = 0.0;
    double wasted_hours = 0.0;
};

struct SimRun {
    std::string policy_id;
    std::optional<AdmissionConfig> admission;
    uint64_t seed = 0;
    int64_t horizon = 0;
    std::vector<EpochRecord> records;
    QueueState final_queues;
    int64_t audited_epochs = 0; // epochs that passed CAC + conservation
    std::vector<int64_t> offered_by_type, accepted_by_type, departed_jobs_by_type;
};

struct RunConfig {
    int64_t horizon = 0;
    uint64_t seed = 0;
    std::optional<AdmissionConfig> admission;
};

/// The discrete-epoch loop: draw, optional admission, policy decision, CAC
/// assertion, queue update, conservation audit, record. Deterministic given
/// (scenario, seed, policy).
SimRun run(const Scenario& sc, Policy& policy, const RunConfig& cfg);

struct StabilityVerdict {
    enum class Class { Bounded, Growing, Inconclusive };
    Class verdict = Class::Inconclusive;
    double slope = 0.0; // backlog growth per epoch over the second half
    double r2 = 0.0;
};

const char* to_string(StabilityVerdict::Class c);

/// Desk-scale heuristic for "bounded expected backlog": least-squares slope
/// of total backlog over the post-burn-in (second) half. Not a proof.
/// Callers pick the tolerance; default_slope_tol gives the scale-free one.
StabilityVerdict stability_diagnostic(const SimRun& run, double slope_tol);

/// Default tolerance: 1% of the mean number of task arrivals per epoch.
double default_slope_tol(const Scenario& sc);

/// Multiplies every arrival law by `factor`, exactly; throws when the scaled
/// law leaves the supported family (non-integer constant, p > 1).
Scenario scale_arrivals(const Scenario& sc, double factor);

struct SweepRow {
    double factor = 1.0;
    int replica = 0;
    uint64_t seed = 0;
    StabilityVerdict verdict;
    double mean_backlog = 0.0; // second-half mean of total backlog
};

struct SweepResult {
    std::vector<SweepRow> rows;        // (factor, replica) order
    bool backlog_monotone = true;      // mean backlog nondecreasing in factor
};

/// Independent seeded runs per (factor, replica); replicas execute
/// concurrently and merge deterministically.
SweepResult sweep(const Scenario& sc, const PolicySpec& policy_spec,
                  const std::vector<double>& factors, int replicas, int64_t horizon);

/// Fixed-column CSV, one row per epoch; floats carry 12 significant digits.
void write_run_csv(std::ostream& os, const SimRun& run, const Scenario& sc);
void write_sweep_csv(std::ostream& os, const SweepResult& res);

} // namespace crowdcap
