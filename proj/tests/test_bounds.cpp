#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "kmt/bounds.hpp"
#include "kmt/distribution.hpp"
#include "oracle_support.hpp"

using namespace kmt;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

WeightSequence geometric_weights(int H = 64) {
    WeightSequence w;
    for (int k = 1; k <= H; ++k) w.u.push_back(std::ldexp(1.0, -k));
    w.tail = TailKind::geometric;
    w.ratio = 0.5;
    return w;
}
}  // namespace

TEST_SUITE("exponential_bound") {

TEST_CASE("divergence is flagged at and below the critical rate") {
    // c*lambda*z <= 1/2: the summand does not decay.
    for (double clz : {0.5, 0.3, 0.1}) {
        const auto bv = kmt_exponential_bound(clz, 1.0, 1.0, 4, 1.0);
        CHECK(bv.log_value == kInf);
        CHECK(bv.vacuous);
    }
    // Just above the critical rate the series converges.
    const auto ok = kmt_exponential_bound(0.51, 1.0, 1.0, 4, 1.0);
    CHECK(std::isfinite(ok.log_value));
}

TEST_CASE("agrees with 200-bit naive summation") {
    struct Tuple { double lambda, sigma, z, c; std::uint64_t m; };
    const std::vector<Tuple> tuples = {
        {0.5, 1.0, 10.0, 1.0, 4},    {0.3, 2.0, 4.0, 1.0, 5},
        {1.0, 0.5, 2.0, 1.0, 21},    {0.7, 1.0, 1.0, 1.0, 300},
        {0.25, 3.0, 30.0, 0.5, 4},   {2.0, 0.1, 5.0, 0.2, 100000},
    };
    for (const auto& t : tuples) {
        REQUIRE(t.c * t.lambda * t.z > 0.5);
        const auto bv = kmt_exponential_bound(t.lambda, t.sigma, t.z, t.m, t.c);
        const double ref = oracle::naive_exp_epoch_bound(t.lambda, t.sigma, t.z, t.m, t.c);
        INFO("lambda=", t.lambda, " z=", t.z, " m=", t.m);
        CHECK(bv.value() == doctest::Approx(ref).epsilon(1e-10));
        // The omitted tail really is negligible at the recorded scale.
        CHECK(bv.truncation_bound <= 1e-15 * std::max(bv.value(), 1e-300));
    }
}

TEST_CASE("vacuous flag tracks value >= 1") {
    const auto big = kmt_exponential_bound(0.6, 1.0, 1.0, 4, 1.0);  // clz = 0.6
    CHECK(big.vacuous);
    CHECK(big.value() >= 1.0);
    const auto small = kmt_exponential_bound(0.5, 1.0, 40.0, 4, 1.0);
    CHECK_FALSE(small.vacuous);
    CHECK(small.value() < 1.0);
}

TEST_CASE("monotone in z and in m") {
    double prev = kInf;
    for (double z : {2.0, 4.0, 8.0, 16.0, 32.0}) {
        const double v = kmt_exponential_bound(0.5, 1.0, z, 4, 1.0).log_value;
        CHECK(v < prev);
        prev = v;
    }
    prev = kInf;
    for (std::uint64_t m : {4ULL, 5ULL, 21ULL, 277ULL, 65813ULL}) {
        const double v = kmt_exponential_bound(0.5, 1.0, 3.0, m, 1.0).log_value;
        CHECK(v < prev);
        prev = v;
    }
    // Within one epoch the bound is constant in m.
    CHECK(kmt_exponential_bound(0.5, 1.0, 3.0, 6, 1.0).log_value ==
          kmt_exponential_bound(0.5, 1.0, 3.0, 20, 1.0).log_value);
}

TEST_CASE("term ledger reproduces the reported value") {
    const auto bv = kmt_exponential_bound(0.4, 2.0, 9.0, 21, 1.0);
    REQUIRE(bv.terms_used == static_cast<int>(bv.term_logs.size()));
    REQUIRE(bv.terms_used >= 1);
    const double mx = *std::max_element(bv.term_logs.begin(), bv.term_logs.end());
    double acc = 0.0;
    for (double t : bv.term_logs) acc += std::exp(t - mx);
    const double lse = mx + std::log(acc);
    CHECK(bv.log_value == doctest::Approx(std::log(2.0) + lse).epsilon(1e-12));
    // Terms decay strictly once past the first (supercritical rate).
    for (std::size_t i = 1; i < bv.term_logs.size(); ++i)
        CHECK(bv.term_logs[i] < bv.term_logs[i - 1]);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS((void)kmt_exponential_bound(0.0, 1.0, 1.0, 4, 1.0), std::domain_error);
    CHECK_THROWS_AS((void)kmt_exponential_bound(1.0, -1.0, 1.0, 4, 1.0), std::domain_error);
    CHECK_THROWS_AS((void)kmt_exponential_bound(1.0, 1.0, 1.0, 3, 1.0), std::domain_error);
}

}  // TEST_SUITE

TEST_SUITE("closed_form_bounds") {

TEST_CASE("mgf and companion tail") {
    CHECK(sakhanenko_exp_mgf_bound(1.0, 4, 1.0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(sakhanenko_exp_mgf_bound(0.567143290409783873, 1, 1.0) ==
          doctest::Approx(1.567143290409783873).epsilon(1e-15));
    // tail = mgf * exp(-c lambda z): at lambda = c = 1, z = ln 3, mgf = 3 it is 1.
    CHECK(sakhanenko_exp_tail_bound(1.0, 4, 1.0, std::log(3.0), 1.0) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS((void)sakhanenko_exp_mgf_bound(-1.0, 4, 1.0), std::domain_error);
}

TEST_CASE("power sum bound") {
    CHECK(sakhanenko_poly_bound(3.0, {1.0}, 1.0) == doctest::Approx(1.0));
    CHECK(sakhanenko_poly_bound(3.0, {1.0, 8.0, 1.0}, 2.0) == doctest::Approx(20.0));
    CHECK(sakhanenko_poly_bound(4.0, {16.0, 2.0}, 2.0) == doctest::Approx(36.0));
    CHECK_THROWS_AS((void)sakhanenko_poly_bound(2.0, {1.0}, 1.0), std::domain_error);
    CHECK_THROWS_AS((void)sakhanenko_poly_bound(3.0, {-1.0}, 1.0), std::domain_error);
}

TEST_CASE("k power tail constant") {
    CHECK(k_power_tail_constant(3.0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(k_power_tail_constant(4.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK_THROWS_AS((void)k_power_tail_constant(2.0), std::domain_error);
}

}  // TEST_SUITE

TEST_SUITE("power_bound") {

TEST_CASE("geometric fixture evaluates exactly") {
    const auto w = geometric_weights();
    std::vector<double> a, ubar;
    for (int k = 1; k <= 64; ++k) {
        a.push_back(static_cast<double>(k));
        ubar.push_back(std::sqrt(static_cast<double>(k)));
    }
    const auto bv = power_bound(w, a, ubar, 4, 1.0, 1.0, 3.0);
    // T_4 = 2^-3 and n_4 = 4, so the bound is 2^-3 + (1/sqrt 4)^3 * 1 = 1/4.
    CHECK(bv.value() == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(bv.terms_used == 61);
    CHECK_FALSE(bv.vacuous);
}

TEST_CASE("epsilon scaling is a pure power law") {
    const auto w = geometric_weights();
    std::vector<double> a, ubar;
    for (int k = 1; k <= 64; ++k) {
        a.push_back(static_cast<double>(k));
        ubar.push_back(std::sqrt(static_cast<double>(k)));
    }
    const double q = 3.0;
    const auto v3 = power_bound(w, a, ubar, 7, 1e3, 1.0, q);
    const auto v6 = power_bound(w, a, ubar, 7, 1e6, 1.0, q);
    CHECK(v6.value() / v3.value() == doctest::Approx(1e-9).epsilon(1e-12));
}

TEST_CASE("matched sequences double the mass at m = 1") {
    const auto w = geometric_weights();
    std::vector<double> a(64, 0.0);
    for (int k = 1; k <= 64; ++k) a[k - 1] = 1.0 + 0.25 * k;
    const double eps = 2.0, Cq = 3.0, q = 3.0;
    const auto bv = power_bound(w, a, a, 1, eps, Cq, q);  // ubar = a: ratio 1
    const double U = 1.0;
    CHECK(bv.value() == doctest::Approx(Cq / std::pow(eps, q) * 2.0 * U).epsilon(1e-14));
}

TEST_CASE("nonincreasing in m") {
    const auto w = geometric_weights();
    std::vector<double> a, ubar;
    for (int k = 1; k <= 64; ++k) {
        a.push_back(std::pow(static_cast<double>(k), 1.2));
        ubar.push_back(std::pow(static_cast<double>(k), 0.4));
    }
    double prev = kInf;
    for (std::size_t m = 1; m <= 64; ++m) {
        const double v = power_bound(w, a, ubar, m, 1.0, 1.0, 3.0).log_value;
        CHECK(v <= prev + 1e-12);
        prev = v;
    }
}

TEST_CASE("shape validation") {
    const auto w = geometric_weights(8);
    std::vector<double> a = {1, 2, 3, 4, 5, 6, 7, 8};
    std::vector<double> short_a = {1, 2, 3};
    std::vector<double> bigger = {2, 3, 4, 5, 6, 7, 8, 9};
    CHECK_THROWS_AS((void)power_bound(w, short_a, short_a, 1, 1.0, 1.0, 3.0),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)power_bound(w, a, bigger, 1, 1.0, 1.0, 3.0),
                    std::domain_error);  // ubar > a
    CHECK_THROWS_AS((void)power_bound(w, a, a, 1, 0.0, 1.0, 3.0), std::domain_error);
    CHECK_THROWS_AS((void)power_bound(w, a, a, 1, 1.0, 1.0, 2.0), std::domain_error);
}

}  // TEST_SUITE

TEST_SUITE("variance_diff") {

TEST_CASE("bounded law: both sides vanish once the tail clears the support") {
    // |X|^q = 1 for Rademacher, so E|X|^q 1{|X|^q > m} = 0 for every m >= 1
    // and every truncation level k^{1/q} >= 1 keeps the full variance.
    const auto rad = DistributionSpec::rademacher();
    for (std::uint64_t m : {1ULL, 2ULL, 50ULL}) {
        const auto cmp = variance_diff_bound(rad, 3.0, m, 3.0, 1000);
        CHECK(cmp.lhs == 0.0);
        CHECK(cmp.rhs == 0.0);
    }
}

TEST_CASE("gaussian law: strictly positive sides, comparison holds") {
    const auto g = DistributionSpec::centered_gaussian(1.0);
    const double Cq = k_power_tail_constant(3.0);
    for (std::uint64_t m : {1ULL, 5ULL, 40ULL}) {
        const auto cmp = variance_diff_bound(g, 3.0, m, Cq, 200000);
        INFO("m=", m);
        CHECK(cmp.lhs > 0.0);
        CHECK(cmp.rhs > 0.0);
        CHECK(cmp.lhs <= cmp.rhs);
    }
}

TEST_CASE("uniform law comparison holds on a grid of m") {
    const auto uni = DistributionSpec::centered_uniform(2.0);
    const double Cq = k_power_tail_constant(3.0);
    for (std::uint64_t m : {1ULL, 10ULL, 100ULL}) {
        const auto cmp = variance_diff_bound(uni, 3.0, m, Cq, 100000);
        INFO("m=", m);
        CHECK(cmp.lhs <= cmp.rhs + 1e-12);
    }
    // Truncation level k^{1/3} >= 2 for k >= 8, so both sides vanish by m = 10.
    const auto far = variance_diff_bound(uni, 3.0, 10, Cq, 100000);
    CHECK(far.lhs == 0.0);
    CHECK(far.rhs == 0.0);
}

TEST_CASE("heavy tails are rejected") {
    CHECK_THROWS_AS((void)variance_diff_bound(
                        DistributionSpec::centered_pareto_symmetric(3.0, 1.0), 3.0, 1,
                        1.0, 100),
                    std::domain_error);
}

}  // TEST_SUITE

TEST_SUITE("bound_value") {

TEST_CASE("json export carries the audit fields") {
    const auto bv = kmt_exponential_bound(0.5, 1.0, 10.0, 4, 1.0);
    const auto js = bound_value_json(bv);
    for (const char* key :
         {"log_value", "value", "vacuous", "terms_used", "truncation_bound"})
        CHECK(js.find(key) != std::string::npos);
    const auto div = bound_value_json(kmt_exponential_bound(0.1, 1.0, 1.0, 4, 1.0));
    CHECK(div.find("\"inf\"") != std::string::npos);
}

}  // TEST_SUITE
