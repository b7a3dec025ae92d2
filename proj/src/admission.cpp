#include "crowdcap/admission.hpp"

#include "crowdcap/rng.hpp"

#include <algorithm>
#include <stdexcept>

namespace crowdcap {

double compute_beta(const std::vector<int64_t>& arrivals, const QueueState& q_tilde,
                    const AdmissionConfig& cfg, const Scenario& sc) {
    if (cfg.nu <= 0) throw std::invalid_argument("admission nu must be > 0");
    if (cfg.variant == 2 && q_tilde.pools < 2)
        throw std::invalid_argument("admission variant II needs multi-pool state");

    Rational coeff(0); // c = sum A_j - nu * sum_{j,s:r>0} Qtilde A_j
    for (int j = 0; j < sc.num_job_types; ++j) {
        coeff += Rational(arrivals[j]);
        Rational backlog(0);
        for (int s : sc.task_skills(j)) {
            if (cfg.variant == 1) {
                int64_t q = 0;
                for (int p = 0; p < q_tilde.pools; ++p) q += q_tilde.at(p, j, s);
                backlog += Rational(q);
            } else {
                int64_t q = q_tilde.at(0, j, s);
                for (int p = 1; p < q_tilde.pools; ++p) q = std::min(q, q_tilde.at(p, j, s));
                backlog += Rational(q);
            }
        }
        coeff -= cfg.nu * backlog * Rational(arrivals[j]);
    }
    return coeff < 0 ? 1.0 : 0.0; // tie accepts
}

std::vector<int64_t> admit(const std::vector<int64_t>& arrivals, double beta, uint64_t seed,
                           int64_t epoch) {
    if (beta < 0.0 || beta > 1.0) throw std::invalid_argument("beta must lie in [0,1]");
    if (beta == 0.0) return arrivals;
    std::vector<int64_t> accepted(arrivals.size(), 0);
    if (beta == 1.0) return accepted;
    for (size_t j = 0; j < arrivals.size(); ++j) {
        CounterRng rng(seed, epoch, CounterRng::Stream::Admission, j);
        accepted[j] = rng.binomial(arrivals[j], 1.0 - beta);
    }
    return accepted;
}

BenchmarkBeta static_benchmark_beta(const RatePoint& rates, const Scenario& sc,
                                    const Rational& eps) {
    bool all_zero = true;
    for (const auto& r : rates.rates) all_zero = all_zero && r == 0;
    if (all_zero) return {BenchmarkStatus::Ok, 0.0};

    auto member = [&](double beta) {
        Rational keep = Rational(1) - rational_from_double(beta);
        RatePoint scaled;
        scaled.rates.reserve(rates.rates.size());
        for (const auto& r : rates.rates) scaled.rates.push_back(keep * r + eps);
        if (is_flexible(sc.job_class)) return outer_region_check(scaled, sc).inside;
        return inflexible_outer_check(scaled, sc).inside;
    };

    if (!member(1.0)) return {BenchmarkStatus::Infeasible, 1.0};
    if (member(0.0)) return {BenchmarkStatus::Ok, 0.0};
    double lo = 0.0, hi = 1.0; // membership is monotone in beta
    while (hi - lo > 1e-6) {
        double mid = 0.5 * (lo + hi);
        (member(mid) ? hi : lo) = mid;
    }
    return {BenchmarkStatus::Ok, hi};
}

} // namespace crowdcap
