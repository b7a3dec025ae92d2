#pragma once

#include <cstdint>
#include <vector>

namespace crowdcap {

/// Counter-based 64-bit generator. Each (seed, epoch, stream, index) tuple
/// names an independent stream; outputs are SplitMix64 finalizations of
/// key + k*gamma for k = 1, 2, ... so draws do not depend on the order other
/// streams are consumed in. Reproducible across runs within this
/// implementation; cross-language ports match moments, not bit-streams.
class CounterRng {
public:
    enum class Stream : uint64_t {
        Arrival = 1,
        Availability = 2,
        Contention = 3,
        Admission = 4,
        Generic = 5,
    };

    CounterRng(uint64_t seed, int64_t epoch, Stream stream, uint64_t index);

    uint64_t next_u64();
    /// Uniform in [0, 1) with 53 random bits.
    double next_unit();
    /// Uniform in [0, n), unbiased (rejection); n must be positive.
    uint64_t next_below(uint64_t n);

    /// Inversion below mean 30, PTRS transformed rejection above.
    int64_t poisson(double mean);
    /// Bernoulli counting; exact and fine at desk scale.
    int64_t binomial(int64_t n, double p);
    /// Index into a cumulative weight table.
    size_t categorical(const std::vector<double>& cumulative);

private:
    uint64_t state_;
};

/// Uniform random permutation of {0, .., n-1} (Fisher-Yates).
std::vector<int> contention_order(CounterRng& rng, int n);

/// Deterministic child-seed derivation for replicas and pools.
uint64_t derive_seed(uint64_t seed, uint64_t a, uint64_t b);

} // namespace crowdcap
