#include "crowdcap/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace crowdcap {

namespace {

constexpr uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

uint64_t mix64(uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

uint64_t combine(uint64_t a, uint64_t b) { return mix64(a + kGamma * (b + 1)); }

} // namespace

CounterRng::CounterRng(uint64_t seed, int64_t epoch, Stream stream, uint64_t index) {
    uint64_t k = mix64(seed + kGamma);
    k = combine(k, static_cast<uint64_t>(epoch));
    k = combine(k, static_cast<uint64_t>(stream));
    k = combine(k, index);
    state_ = k;
}

uint64_t CounterRng::next_u64() {
    state_ += kGamma;
    return mix64(state_);
}

double CounterRng::next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

uint64_t CounterRng::next_below(uint64_t n) {
    if (n == 0) throw std::invalid_argument("next_below(0)");
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t v;
    do {
        v = next_u64();
    } while (v >= limit);
    return v % n;
}

int64_t CounterRng::poisson(double mean) {
    if (mean < 0) throw std::invalid_argument("poisson mean < 0");
    if (mean == 0) return 0;
    if (mean < 30.0) {
        // Inversion by sequential search on the cdf.
        double p = std::exp(-mean);
        double cdf = p;
        double u = next_unit();
        int64_t k = 0;
        while (u > cdf) {
            ++k;
            p *= mean / static_cast<double>(k);
            cdf += p;
            if (k > 1000000) break; // numerically saturated tail
        }
        return k;
    }
    // PTRS transformed rejection (Hormann 1993), exact for mean >= 10.
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mean = std::log(mean);
    for (;;) {
        double u = next_unit() - 0.5;
        double v = next_unit();
        double us = 0.5 - std::fabs(u);
        double kd = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<int64_t>(kd);
        if (kd < 0 || (us < 0.013 && v > us)) continue;
        double k = kd;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            k * log_mean - mean - std::lgamma(k + 1.0)) {
            return static_cast<int64_t>(kd);
        }
    }
}

int64_t CounterRng::binomial(int64_t n, double p) {
    if (n < 0 || p < 0.0 || p > 1.0) throw std::invalid_argument("binomial parameters");
    if (n == 0 || p == 0.0) return 0;
    if (p == 1.0) return n;
    int64_t count = 0;
    for (int64_t i = 0; i < n; ++i)
        if (next_unit() < p) ++count;
    return count;
}

size_t CounterRng::categorical(const std::vector<double>& cumulative) {
    double u = next_unit();
    for (size_t k = 0; k < cumulative.size(); ++k)
        if (u < cumulative[k]) return k;
    return cumulative.size() - 1;
}

std::vector<int> contention_order(CounterRng& rng, int n) {
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int i = n - 1; i > 0; --i) {
        int j = static_cast<int>(rng.next_below(static_cast<uint64_t>(i) + 1));
        std::swap(perm[i], perm[j]);
    }
    return perm;
}

uint64_t derive_seed(uint64_t seed, uint64_t a, uint64_t b) {
    return combine(combine(mix64(seed + kGamma), a), b);
}

} // namespace crowdcap
