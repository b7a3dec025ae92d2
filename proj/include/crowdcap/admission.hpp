#pragma once

#include "crowdcap/model.hpp"
#include "crowdcap/plan.hpp"

#include <cstdint>
#include <vector>

namespace crowdcap {

/// Bang-bang minimizer of the per-epoch decline objective
///   beta * sum_j A_j - nu * beta * sum_{j,s: r>0} Qtilde_{j,s} A_j   (variant 1)
/// with min over pools of Qtilde^l_{j,s} in variant 2. The objective is
/// linear in beta, so the minimizer is 0 or 1; ties accept (beta = 0).
double compute_beta(const std::vector<int64_t>& arrivals, const QueueState& q_tilde,
                    const AdmissionConfig& cfg, const Scenario& sc);

/// Accepted arrivals: identity at beta 0, all-decline at beta 1, independent
/// Bernoulli(1 - beta) per job otherwise. Declined jobs never enter a queue.
std::vector<int64_t> admit(const std::vector<int64_t>& arrivals, double beta, uint64_t seed,
                           int64_t epoch);

enum class BenchmarkStatus { Ok, Infeasible };

struct BenchmarkBeta {
    BenchmarkStatus status = BenchmarkStatus::Ok;
    double beta = 0.0;
};

/// Smallest beta with (1-beta) lambda + eps 1 inside the outer-region
/// surrogate (C^out for flexible classes, its per-pool decomposition for
/// inflexible ones), by binary search to 1e-6. The surrogate stands in for
/// the exact capacity region, which this artifact does not decide; pick
/// scenarios where the surrogate is tight when quantitative answers matter.
BenchmarkBeta static_benchmark_beta(const RatePoint& rates, const Scenario& sc,
                                    const Rational& eps);

} // namespace crowdcap
