#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "crowdcap/instances.hpp"
#include "crowdcap/rng.hpp"
#include "crowdcap/sampling.hpp"

#include <cmath>
#include <map>

using namespace crowdcap;

TEST_CASE("sample_epoch is a pure function of (spec, seed, epoch)") {
    auto sc = counterexample_3a("poisson");
    auto a = sample_epoch(sc, 99, 1234);
    auto b = sample_epoch(sc, 99, 1234);
    CHECK(a.arrivals == b.arrivals);
    CHECK(a.availability == b.availability);
    auto c = sample_epoch(sc, 100, 1234);
    auto d = sample_epoch(sc, 99, 1235);
    bool all_same = a.arrivals == c.arrivals && a.availability == c.availability &&
                    a.arrivals == d.arrivals && a.availability == d.availability;
    CHECK_FALSE(all_same);
}

TEST_CASE("constant arrivals are constant") {
    auto sc = counterexample_3a("constant");
    for (int64_t t = 0; t < 50; ++t) CHECK(sample_epoch(sc, 5, t).arrivals[0] == 4);
}

TEST_CASE("joint categorical availability hits each support row half the time") {
    auto sc = counterexample_3a();
    int first = 0;
    const int T = 10000;
    for (int64_t t = 0; t < T; ++t) {
        auto u = sample_epoch(sc, 7, t).availability[0];
        bool is_a = u[0] == 0 && u[1] == 10;
        bool is_b = u[0] == 10 && u[1] == 0;
        REQUIRE((is_a || is_b)); // support membership, always
        if (is_a) ++first;
    }
    double freq = static_cast<double>(first) / T;
    CHECK(freq == doctest::Approx(0.5).epsilon(0.04)); // 0.5 +/- 0.02
}

TEST_CASE("poisson(4): sample mean over 1e5 draws within 4 +/- 0.05") {
    CounterRng rng(11, 0, CounterRng::Stream::Generic, 0);
    double sum = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        int64_t v = rng.poisson(4.0);
        REQUIRE(v >= 0);
        sum += static_cast<double>(v);
    }
    CHECK(std::fabs(sum / n - 4.0) < 0.05);
}

TEST_CASE("poisson large mean: PTRS matches mean and variance within 5 SE") {
    CounterRng rng(13, 0, CounterRng::Stream::Generic, 0);
    const double mean = 48.0;
    const int n = 100000;
    double sum = 0, sq = 0;
    for (int i = 0; i < n; ++i) {
        double v = static_cast<double>(rng.poisson(mean));
        sum += v;
        sq += v * v;
    }
    double m = sum / n;
    double var = sq / n - m * m;
    CHECK(std::fabs(m - mean) < 5.0 * std::sqrt(mean / n));
    CHECK(std::fabs(var - mean) < 0.05 * mean);
}

TEST_CASE("empirical means match mean_of within 5 standard errors") {
    struct Case {
        DistributionSpec spec;
        double variance;
    };
    std::vector<Case> cases = {
        {DistributionSpec::constant(4), 0.0},
        {DistributionSpec::poisson(Rational(7, 2)), 3.5},
        {DistributionSpec::binomial(10, Rational(3, 10)), 10 * 0.3 * 0.7},
        {DistributionSpec::categorical({{1}, {5}}, {Rational(3, 4), Rational(1, 4)}),
         // E=2, E[X^2]=7 -> var=3
         3.0},
    };
    const int n = 100000;
    for (size_t k = 0; k < cases.size(); ++k) {
        CounterRng rng(17, static_cast<int64_t>(k), CounterRng::Stream::Generic, k);
        double sum = 0;
        for (int i = 0; i < n; ++i) {
            int64_t v = sample_scalar(cases[k].spec, rng);
            REQUIRE(v >= 0);
            sum += static_cast<double>(v);
        }
        double mean = to_double(mean_of(cases[k].spec)[0]);
        double se = std::sqrt(cases[k].variance / n);
        if (cases[k].variance == 0.0)
            CHECK(sum / n == mean);
        else
            CHECK(std::fabs(sum / n - mean) < 5.0 * se);
    }
}

TEST_CASE("binomial(10, 0.3) stays in range and has the right mean") {
    CounterRng rng(23, 0, CounterRng::Stream::Generic, 0);
    double sum = 0;
    const int n = 50000;
    for (int i = 0; i < n; ++i) {
        int64_t v = rng.binomial(10, 0.3);
        REQUIRE(v >= 0);
        REQUIRE(v <= 10);
        sum += static_cast<double>(v);
    }
    CHECK(std::fabs(sum / n - 3.0) < 5.0 * std::sqrt(2.1 / n));
}

TEST_CASE("contention orders are uniform over permutations (k = 3)") {
    const int k = 3;
    std::map<std::vector<int>, int> counts;
    const int T = 10000;
    for (int64_t t = 0; t < T; ++t) {
        CounterRng rng(31, t, CounterRng::Stream::Contention, 0);
        counts[contention_order(rng, k)]++;
    }
    CHECK(counts.size() == 6);
    for (const auto& [perm, c] : counts) {
        double freq = static_cast<double>(c) / T;
        CHECK(std::fabs(freq - 1.0 / 6.0) < 0.02);
    }
}

TEST_CASE("stream separation: arrival and availability draws differ") {
    CounterRng a(41, 5, CounterRng::Stream::Arrival, 2);
    CounterRng b(41, 5, CounterRng::Stream::Availability, 2);
    bool any_diff = false;
    for (int i = 0; i < 8; ++i) any_diff = any_diff || a.next_u64() != b.next_u64();
    CHECK(any_diff);
}

TEST_CASE("contention orders are uniform over permutations (k = 4)") {
    const int k = 4;
    std::map<std::vector<int>, int> counts;
    const int T = 10000;
    for (int64_t t = 0; t < T; ++t) {
        CounterRng rng(77, t, CounterRng::Stream::Contention, 1);
        counts[contention_order(rng, k)]++;
    }
    CHECK(counts.size() == 24);
    for (const auto& [perm, c] : counts) {
        double freq = static_cast<double>(c) / T;
        CHECK(std::fabs(freq - 1.0 / 24.0) < 0.02);
    }
}
