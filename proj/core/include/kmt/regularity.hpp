// Regularity parameters of a centered law: the largest tilt lambda with
// lambda * E[|X|^3 e^{lambda|X|}] <= Var(X), the smallest Bernstein-condition
// constant, the exponential-moment pair they induce, and numeric checks of
// the equivalence edges between those three descriptions.
#pragma once

#include <string>
#include <vector>

#include "kmt/distribution.hpp"

namespace kmt {

// Bisection certificate: h(lo) <= 0 < h(hi) for h(l) = l*tilted_third(l) - Var.
struct BracketCertificate {
    double lo = 0.0, hi = 0.0;
    double h_lo = 0.0, h_hi = 0.0;
};

struct BernsteinScan {
    double value = 0.0;    // max over integer q in [3, q_max] of the q-th term
    int argmax_q = 3;
    int offending_q = 0;   // first q with divergent moment (0 if none)
    double margin = 0.0;   // term(q_max)/term(q_max-1), truncation audit
    int q_max = 0;
};

struct RegularityReport {
    double lambda_sak = 0.0;
    bool heavy_tail_flag = false;
    BracketCertificate lambda_bracket;
    double sak_residual = 0.0;  // Var - lambda*tilted_third(lambda) >= 0
    BernsteinScan bernstein;
    double exp_pair_t = 0.0;    // (t, C) = (lambda, lambda^-3 + e^lambda)
    double exp_pair_C = 0.0;
    int q_max_used = 0;
};

// Largest feasible tilt by bisection on h(l) = l*tilted_third(l) - Var(X);
// h is continuous and increasing with h(0) = -Var < 0. Returns the certified
// feasible bracket end (h(result) <= 0). Heavy-tail families return 0 with
// the certificate collapsed (no positive tilt is feasible).
double sakhanenko_parameter(const DistributionSpec& spec, double rel_tol = 1e-10,
                            BracketCertificate* cert = nullptr);

// max over integer q in [3, q_max] of (2 E|X|^q / (q! Var))^{1/(q-2)},
// scanned in log space; +infinity with the first offending q when a required
// moment diverges.
BernsteinScan bernstein_scan(const DistributionSpec& spec, int q_max = 200);
double bernstein_parameter(const DistributionSpec& spec, int q_max = 200);

RegularityReport regularity_report(const DistributionSpec& spec,
                                   double rel_tol = 1e-10, int q_max = 200);

// One equivalence edge: lhs <= rhs demanded with normalized slack
// (rhs - lhs)/max(1, |rhs|), reported at the worst q where applicable.
struct EdgeCheck {
    std::string edge;  // "b", "c", "d", "e"
    double lhs = 0.0, rhs = 0.0;
    double slack = 0.0;
    double q_or_m = 0.0;  // worst q for Bernstein-type edges, 0 otherwise
    bool pass = false;
    std::string note;
};

// Numeric verification of the derivations between the descriptions:
//   b: (t*, C* = E e^{t*|X|}) => Bernstein constant 2 C* s * min(t* s, 1)^-3
//      with s = ubar_sigma <= sd(X), checked at every q in [3, q_check];
//   c: lambda = 1/(7 b) from the measured Bernstein constant is feasible;
//   d: Bernstein constant 1/lambda from the measured tilt, checked per q;
//   e: (t, C) = (lambda, lambda^-3 + e^lambda) dominates E e^{lambda|X|}.
// t_choice < 0 selects the default t* = lambda/2.
std::vector<EdgeCheck> relation_check(const DistributionSpec& spec,
                                      double ubar_sigma, double t_choice = -1.0,
                                      int q_check = 40);

// sigma^-1 sqrt(log(ubar_sigma^2 / (8 sqrt(3) sigma^3))); requires the log
// argument to exceed 1, else throws ("vacuous constant").
double sub_gaussian_lambda(double sigma, double ubar_sigma);

// q 2^{q/2} sigma^q Gamma(q/2), the sub-Gaussian absolute-moment majorant.
double sub_gaussian_moment_bound(double q, double sigma);

struct FamilySweep {
    std::vector<DistributionSpec> specs;
    std::vector<double> m_grid;
    std::vector<double> K_grid;
};

struct TailProfilePoint {
    double m = 0.0;
    double sup_tail = 0.0;  // sup over the sweep of tail_moment(spec, q, m)
};

struct TailProfile {
    double q = 0.0;
    std::vector<TailProfilePoint> points;  // ordered as the m-grid
    double threshold = 0.0;
    bool falls_below_threshold = false;  // within the grid
};

TailProfile uniform_tail_profile(const FamilySweep& sweep, double q,
                                 double threshold = 1e-3);

// JSON/CSV emission. CSV columns are fixed: quantity,value,slack,q_or_m,status.
std::string regularity_report_json(const DistributionSpec& spec,
                                   const RegularityReport& report,
                                   const std::vector<EdgeCheck>& edges);
std::string tail_profile_json(const TailProfile& profile);
std::string regularity_csv(const DistributionSpec& spec,
                           const RegularityReport& report,
                           const std::vector<EdgeCheck>& edges);
std::string tail_profile_csv(const TailProfile& profile);

}  // namespace kmt
