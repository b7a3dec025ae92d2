#pragma once

#include "crowdcap/model.hpp"
#include "crowdcap/rng.hpp"

#include <cstdint>
#include <vector>

namespace crowdcap {

/// One epoch's realized randomness: A(t) and U(t).
struct EpochDraw {
    std::vector<int64_t> arrivals;                  // per job type
    std::vector<std::vector<int64_t>> availability; // [category][type]
};

/// Pure function of (scenario, seed, epoch). Arrival coordinate j uses
/// stream (Arrival, j); availability for agent type flat index t uses
/// (Availability, t), with joint categorical categories drawing once from
/// the stream of their first type.
EpochDraw sample_epoch(const Scenario& s, uint64_t seed, int64_t epoch);

/// Single draw from a scalar spec (used by tests and admission thinning).
int64_t sample_scalar(const DistributionSpec& d, CounterRng& rng);

} // namespace crowdcap
