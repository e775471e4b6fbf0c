#include <cmath>
#include <limits>

#include <doctest.h>

#include "kmt/distribution.hpp"
#include "kmt/regularity.hpp"
#include "oracle_support.hpp"

using namespace kmt;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
// Frozen independently derived values (bisection / closed-form evaluation).
const double kW1 = 0.567143290409783873;
const double kGaussianLambda = 0.32897165275022111301;  // sigma = 1
const double kLaplaceLambda = 0.32667248982851461787;   // beta = 0.5
}  // namespace

TEST_SUITE("regularity") {

TEST_CASE("tilt parameter of Rademacher is the Lambert value") {
    BracketCertificate cert;
    const double lam = sakhanenko_parameter(DistributionSpec::rademacher(), 1e-12, &cert);
    CHECK(lam == doctest::Approx(static_cast<double>(oracle::w1())).epsilon(1e-10));
    CHECK(lam == doctest::Approx(kW1).epsilon(1e-10));
    // Certificate brackets the root: h(lo) <= 0 < h(hi).
    CHECK(cert.h_lo <= 0.0);
    CHECK(cert.h_hi > 0.0);
    CHECK(cert.lo <= lam);
    CHECK(cert.hi >= lam);
    CHECK(cert.hi - cert.lo <= 1e-12 * cert.hi + 1e-300);
}

TEST_CASE("tilt parameter of Gaussian and Laplace match frozen roots") {
    CHECK(sakhanenko_parameter(DistributionSpec::centered_gaussian(1.0)) ==
          doctest::Approx(kGaussianLambda).epsilon(1e-8));
    CHECK(sakhanenko_parameter(DistributionSpec::centered_laplace(0.5)) ==
          doctest::Approx(kLaplaceLambda).epsilon(1e-8));
}

TEST_CASE("heavy tails give zero tilt with flag") {
    const auto spec = DistributionSpec::centered_pareto_symmetric(3.0, 1.0);
    BracketCertificate cert;
    CHECK(sakhanenko_parameter(spec, 1e-10, &cert) == 0.0);
    const auto rep = regularity_report(spec);
    CHECK(rep.heavy_tail_flag);
    CHECK(rep.lambda_sak == 0.0);
    CHECK(rep.exp_pair_t == 0.0);
}

TEST_CASE("bernstein scan: menu families") {
    const auto rad = bernstein_scan(DistributionSpec::rademacher(), 200);
    CHECK(rad.value == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK(rad.argmax_q == 3);
    CHECK(rad.offending_q == 0);

    // Laplace: every term equals beta exactly, so the scan returns beta.
    const auto lap = bernstein_scan(DistributionSpec::centered_laplace(0.37), 200);
    CHECK(lap.value == doctest::Approx(0.37).epsilon(1e-13));

    const auto uni = bernstein_scan(DistributionSpec::centered_uniform(1.0), 200);
    CHECK(uni.value == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(uni.argmax_q == 3);

    const auto par =
        bernstein_scan(DistributionSpec::centered_pareto_symmetric(3.0, 1.0), 200);
    CHECK(par.value == kInf);
    CHECK(par.offending_q == 3);  // E|X|^3 already diverges at kappa = 3
}

TEST_CASE("bernstein parameter is stable under doubling q_max") {
    for (const auto& s : {DistributionSpec::rademacher(),
                          DistributionSpec::centered_gaussian(0.8),
                          DistributionSpec::centered_laplace(0.5),
                          DistributionSpec::centered_uniform(2.0)}) {
        const double b200 = bernstein_parameter(s, 200);
        const double b400 = bernstein_parameter(s, 400);
        CHECK(b200 == doctest::Approx(b400).epsilon(1e-12));
    }
}

TEST_CASE("relation edges on Rademacher") {
    const auto edges = relation_check(DistributionSpec::rademacher(), 1.0);
    REQUIRE(edges.size() == 4);
    for (const auto& e : edges) {
        INFO("edge ", e.edge, " slack ", e.slack);
        CHECK(e.pass);
        CHECK(e.slack >= -1e-9);
    }
    // Edge (e): C = W(1)^{-3} + e^{W(1)} vs E e^{W(1)|X|} = e^{W(1)} = 1/W(1).
    // The rhs inherits the 1e-10 tilt-bisection tolerance through the lambda^-3
    // derivative (|dC/dlambda| ~ 29), so 1e-9 relative is the sharp comparison.
    const auto& e = edges[3];
    CHECK(e.rhs == doctest::Approx(7.2450028644631427303).epsilon(1e-9));
    CHECK(e.lhs == doctest::Approx(1.0 / kW1).epsilon(1e-10));
}

TEST_CASE("relation edge (d) slack nonnegative across light families") {
    for (const auto& s : {DistributionSpec::rademacher(),
                          DistributionSpec::centered_gaussian(1.3),
                          DistributionSpec::centered_laplace(0.4),
                          DistributionSpec::centered_uniform(0.9),
                          DistributionSpec::centered_two_point(0.25, 1.1)}) {
        const auto edges = relation_check(s, 0.5 * std_dev(s));
        for (const auto& e : edges)
            if (e.edge == "d") CHECK(e.slack >= -1e-9);
    }
}

TEST_CASE("relation precondition failures") {
    CHECK_THROWS_AS((void)relation_check(DistributionSpec::rademacher(), 2.0),
                    std::domain_error);  // ubar_sigma^2 > Var
    CHECK_THROWS_AS(
        (void)relation_check(DistributionSpec::centered_pareto_symmetric(3.0, 1.0), 0.5),
        std::domain_error);  // heavy tail
}

TEST_CASE("sub gaussian formulas") {
    CHECK(sub_gaussian_lambda(0.05, 0.05) ==
          doctest::Approx(12.115850569235330735).epsilon(1e-12));
    CHECK(sub_gaussian_lambda(0.01, 0.01) ==
          doctest::Approx(140.58529439362427832).epsilon(1e-12));
    CHECK_THROWS_WITH_AS((void)sub_gaussian_lambda(1.0, 1.0),
                         doctest::Contains("vacuous constant"), std::domain_error);

    CHECK(sub_gaussian_moment_bound(2.0, 1.0) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(sub_gaussian_moment_bound(6.0, 1.0) == doctest::Approx(96.0).epsilon(1e-13));
    CHECK(sub_gaussian_moment_bound(4.0, 2.0) == doctest::Approx(256.0).epsilon(1e-13));
    // Domination of Gaussian moments for q in {2, 3, 4, 6}.
    for (double sigma : {0.5, 1.0, 2.0})
        for (double q : {2.0, 3.0, 4.0, 6.0})
            CHECK(abs_moment(DistributionSpec::centered_gaussian(sigma), q) <=
                  sub_gaussian_moment_bound(q, sigma) * (1.0 + 1e-12));
}

TEST_CASE("uniform tail profile") {
    FamilySweep rad_sweep;
    rad_sweep.specs = {DistributionSpec::rademacher()};
    rad_sweep.m_grid = {0.5, 2.0};
    const auto prof = uniform_tail_profile(rad_sweep, 3.0);
    REQUIRE(prof.points.size() == 2);
    CHECK(prof.points[0].sup_tail == doctest::Approx(1.0));
    CHECK(prof.points[1].sup_tail == doctest::Approx(0.0));
    CHECK(prof.falls_below_threshold);  // 0 < 1e-3

    FamilySweep uni_sweep;
    for (double h : {1.0, 2.0, 3.0})
        uni_sweep.specs.push_back(DistributionSpec::centered_uniform(h));
    uni_sweep.m_grid = {0.0};
    const auto uprof = uniform_tail_profile(uni_sweep, 3.0);
    CHECK(uprof.points[0].sup_tail == doctest::Approx(6.75).epsilon(1e-13));

    // Singleton sweep reduces to tail_moment pointwise.
    FamilySweep one;
    one.specs = {DistributionSpec::centered_laplace(0.5)};
    one.m_grid = {0.1, 1.0, 5.0};
    const auto lprof = uniform_tail_profile(one, 3.0);
    for (const auto& pt : lprof.points)
        CHECK(pt.sup_tail ==
              doctest::Approx(tail_moment(one.specs[0], 3.0, pt.m)).epsilon(1e-14));
}

TEST_CASE("report exports parse") {
    const auto spec = DistributionSpec::rademacher();
    const auto rep = regularity_report(spec);
    const auto edges = relation_check(spec, 1.0);
    const std::string js = regularity_report_json(spec, rep, edges);
    CHECK(js.find("lambda_sak") != std::string::npos);
    const std::string cs = regularity_csv(spec, rep, edges);
    CHECK(cs.rfind("#schema=1", 0) == 0);
    CHECK(cs.find("edge_e") != std::string::npos);
}

}  // TEST_SUITE
