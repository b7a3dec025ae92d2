#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "crowdcap/admission.hpp"
#include "crowdcap/instances.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace crowdcap;

namespace {

AdmissionConfig cfg(Rational nu, int variant = 1) {
    AdmissionConfig c;
    c.nu = std::move(nu);
    c.variant = variant;
    return c;
}

} // namespace

TEST_CASE("compute_beta: empty queues accept everything") {
    auto sc = test::small_scenario(2, 1, SystemClass::FD, {{1}, {1}}, {{1}});
    QueueState qs(1, 2, 1);
    CHECK(compute_beta({3, 4}, qs, cfg(Rational(1, 10)), sc) == 0.0);
}

TEST_CASE("compute_beta: direct arithmetic on the decline objective") {
    // sum A = 10, sum Qtilde*A over positive-requirement pairs = 200,
    // nu = 0.1 -> c = 10 - 20 = -10 -> decline.
    auto sc = test::small_scenario(1, 2, SystemClass::FND, {{1, 1}}, {{1, 1}});
    QueueState qs(1, 1, 2);
    qs.at(0, 0, 0) = 10;
    qs.at(0, 0, 1) = 10; // backlog per (j,s); sum Qtilde*A = (10+10)*10 = 200
    CHECK(compute_beta({10}, qs, cfg(Rational(1, 10)), sc) == 1.0);
}

TEST_CASE("compute_beta: exact tie accepts") {
    // c = A - nu * Q * A = 5 - 1*(1)*5 = 0 -> beta 0.
    auto sc = test::small_scenario(1, 1, SystemClass::FD, {{1}}, {{1}});
    QueueState qs(1, 1, 1);
    qs.at(0, 0, 0) = 1;
    CHECK(compute_beta({5}, qs, cfg(Rational(1)), sc) == 0.0);
}

TEST_CASE("compute_beta: scaling queues up never flips decline back to accept") {
    auto sc = test::small_scenario(2, 2, SystemClass::FND, {{1, 1}, {2, 0}}, {{1, 1}});
    QueueState qs(1, 2, 2);
    qs.at(0, 0, 0) = qs.at(0, 0, 1) = 3;
    qs.at(0, 1, 0) = 7;
    std::vector<int64_t> arrivals = {2, 5};
    auto nu = cfg(Rational(1, 20));
    double before = compute_beta(arrivals, qs, nu, sc);
    for (auto& q : qs.q) q *= 5;
    double after = compute_beta(arrivals, qs, nu, sc);
    CHECK(after >= before);
}

TEST_CASE("compute_beta variant II: min across pools drives the penalty") {
    auto sc = symmetric_pools(2, 1, 1);
    QueueState qs(2, 1, 1);
    qs.at(0, 0, 0) = 100;
    qs.at(1, 0, 0) = 0; // min is zero: accept regardless of the loaded pool
    CHECK(compute_beta({5}, qs, cfg(Rational(1), 2), sc) == 0.0);
    qs.at(1, 0, 0) = 100;
    CHECK(compute_beta({5}, qs, cfg(Rational(1), 2), sc) == 1.0);
}

TEST_CASE("compute_beta: variant II needs pools") {
    auto sc = test::small_scenario(1, 1, SystemClass::FD, {{1}}, {{1}});
    QueueState qs(1, 1, 1);
    CHECK_THROWS_AS(compute_beta({1}, qs, cfg(Rational(1), 2), sc), std::invalid_argument);
}

TEST_CASE("admit: identity at 0, empty at 1, binomial in between") {
    std::vector<int64_t> arrivals = {1000, 3};
    CHECK(admit(arrivals, 0.0, 5, 0) == arrivals);
    CHECK(admit(arrivals, 1.0, 5, 0) == std::vector<int64_t>{0, 0});
    double mean = 0;
    const int trials = 200;
    for (int64_t t = 0; t < trials; ++t) {
        auto acc = admit(arrivals, 0.5, 5, t);
        CHECK(acc[0] <= arrivals[0]);
        mean += static_cast<double>(acc[0]);
    }
    mean /= trials;
    CHECK(std::fabs(mean - 500.0) < 50.0);
}

TEST_CASE("static benchmark: zero rates decline nothing") {
    auto sc = test::small_scenario(1, 1, SystemClass::FD, {{1}}, {{1}});
    RatePoint zero{{Rational(0)}};
    auto res = static_benchmark_beta(zero, sc, Rational(1, 100));
    CHECK(res.status == BenchmarkStatus::Ok);
    CHECK(res.beta == 0.0);
}

TEST_CASE("static benchmark: strictly inside needs no declining") {
    auto sc = test::small_scenario(1, 1, SystemClass::FD, {{1}}, {{4}});
    sc.availability_dists = {DistributionSpec::constant(1)};
    RatePoint pt{{Rational(2)}};
    auto res = static_benchmark_beta(pt, sc, Rational(1, 1000));
    CHECK(res.status == BenchmarkStatus::Ok);
    CHECK(res.beta == 0.0);
}

TEST_CASE("static benchmark: 1.5x the single-skill boundary gives beta 1/3") {
    // lambda * r = 1.5 x capacity; as eps -> 0 the closed form is
    // (1 - beta) * 1.5 = 1.
    auto sc = test::small_scenario(1, 1, SystemClass::FD, {{2}}, {{1}});
    sc.availability_dists = {DistributionSpec::constant(4)}; // 4 hours/epoch, cap 2 jobs
    RatePoint pt{{Rational(3)}};                             // 6 hours demanded
    auto res = static_benchmark_beta(pt, sc, Rational(1, 1000000));
    CHECK(res.status == BenchmarkStatus::Ok);
    CHECK(std::fabs(res.beta - 1.0 / 3.0) < 1e-3);
}

TEST_CASE("static benchmark: infeasible when eps dominates capacity") {
    auto sc = test::small_scenario(1, 1, SystemClass::FD, {{1}}, {{1}});
    sc.availability_dists = {DistributionSpec::constant(2)}; // 2 hours per epoch
    RatePoint pt{{Rational(50)}};
    auto res = static_benchmark_beta(pt, sc, Rational(5)); // eps alone exceeds capacity
    CHECK(res.status == BenchmarkStatus::Infeasible);
}

TEST_CASE("static benchmark: inflexible scenarios use the pool decomposition") {
    auto sc = symmetric_pools(2, 1, 1);
    // One job type, r = 1, two pools of 20 mean hours each -> boundary 40.
    RatePoint pt{{Rational(60)}};
    auto res = static_benchmark_beta(pt, sc, Rational(1, 1000000));
    CHECK(res.status == BenchmarkStatus::Ok);
    CHECK(std::fabs(res.beta - 1.0 / 3.0) < 1e-3);
}
