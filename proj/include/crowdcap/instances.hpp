#pragma once

#include "crowdcap/model.hpp"

#include <cstdint>
#include <string>

namespace crowdcap {

/// The two-skill non-decomposable instance where the mean balance looks fine
/// but availability alternates between the skills, so nothing ever departs.
/// arrival_kind: "constant" or "poisson" (rate lambda).
Scenario counterexample_3a(const std::string& arrival_kind = "constant", int64_t lambda = 4,
                           int64_t horizon = 5000, uint64_t seed = 1);

/// Complementary half-support availability with a two-point arrival law:
/// N = 1, r = ones(S), h_1 covers the first S/2 skills, h_2 the rest, a
/// constant pool of `lambda` agents per type. Arrivals take a small value
/// most epochs and spike to 2*lambda with probability 1/(2*lambda). S even.
Scenario prop5_nd(int num_skills, int64_t lambda, double alpha = 0.1, int64_t horizon = 10000,
                  uint64_t seed = 1);

/// The two-job/two-category illustration: type 0 jobs served by either
/// category, type 1 only by category 1.
Scenario intro_two_category(int64_t horizon = 1000, uint64_t seed = 1);

/// Symmetric inflexible pools over a complete graph. Arrival rates sit
/// exactly on the per-skill boundary of the pool-decomposed outer region at
/// load 1.0; sweep factors scale from there.
Scenario symmetric_pools(int num_categories, int num_job_types, int num_skills,
                         double load = 1.0, int64_t horizon = 20000, uint64_t seed = 1);

/// Dispatch by instance id: counterexample_3a | prop5_nd | intro_two_category
/// | symmetric_pools. Parameter errors throw std::invalid_argument.
struct InstanceParams {
    int num_skills = 2;
    int num_job_types = 4;
    int num_categories = 2;
    int64_t lambda = 4;
    double alpha = 0.1;
    double load = 1.0;
    std::string arrival_kind = "constant";
    int64_t horizon = 5000;
    uint64_t seed = 1;
};

Scenario make_named_instance(const std::string& id, const InstanceParams& params);

} // namespace crowdcap
