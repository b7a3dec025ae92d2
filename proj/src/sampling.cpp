#include "crowdcap/sampling.hpp"

#include <stdexcept>

namespace crowdcap {

namespace {

std::vector<double> cumulative_weights(const DistributionSpec& d) {
    std::vector<double> cum(d.weights.size());
    double acc = 0.0;
    for (size_t k = 0; k < d.weights.size(); ++k) {
        acc += to_double(d.weights[k]);
        cum[k] = acc;
    }
    return cum;
}

} // namespace

int64_t sample_scalar(const DistributionSpec& d, CounterRng& rng) {
    using Kind = DistributionSpec::Kind;
    switch (d.kind) {
    case Kind::Constant:
        return to_int64(d.value);
    case Kind::Poisson:
        return rng.poisson(to_double(d.mean));
    case Kind::Binomial:
        return rng.binomial(d.trials, to_double(d.prob));
    case Kind::Categorical: {
        if (d.dimension() != 1) throw std::invalid_argument("vector categorical used as scalar");
        return d.support[rng.categorical(cumulative_weights(d))][0];
    }
    }
    throw std::logic_error("unreachable");
}

EpochDraw sample_epoch(const Scenario& s, uint64_t seed, int64_t epoch) {
    EpochDraw draw;
    draw.arrivals.resize(s.num_job_types);
    for (int j = 0; j < s.num_job_types; ++j) {
        CounterRng rng(seed, epoch, CounterRng::Stream::Arrival, static_cast<uint64_t>(j));
        draw.arrivals[j] = sample_scalar(s.arrival_dists[j], rng);
    }

    draw.availability.resize(s.num_categories);
    for (int l = 0; l < s.num_categories; ++l) {
        int off = s.category_offset(l);
        int m = s.types_per_category[l];
        draw.availability[l].resize(m);
        const auto& first = s.availability_dists[off];
        if (first.kind == DistributionSpec::Kind::Categorical && first.dimension() > 1) {
            // Joint draw for the whole category: one support row per epoch.
            CounterRng rng(seed, epoch, CounterRng::Stream::Availability,
                           static_cast<uint64_t>(off));
            const auto& row = first.support[rng.categorical(cumulative_weights(first))];
            for (int i = 0; i < m; ++i) draw.availability[l][i] = row[i];
        } else {
            for (int i = 0; i < m; ++i) {
                CounterRng rng(seed, epoch, CounterRng::Stream::Availability,
                               static_cast<uint64_t>(off + i));
                draw.availability[l][i] = sample_scalar(s.availability_dists[off + i], rng);
            }
        }
    }
    return draw;
}

} // namespace crowdcap
