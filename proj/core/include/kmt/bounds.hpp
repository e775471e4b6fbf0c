#pragma once
// Numerically stable evaluators for the nonasymptotic coupling bounds:
// the doubly-exponential epoch series (exponential-moment case) and the
// tail-weighted block bound (power-moment case), plus the small closed-form
// bounds they are assembled from.
//
// Universal constants (c, Cs, Cq) are never fixed numerically by the theory;
// they are explicit inputs here, defaulting to 1.0. Results under defaults
// describe bound shape and relative behavior only.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "kmt/blocks.hpp"
#include "kmt/distribution.hpp"

namespace kmt {

// Evaluation of a (possibly huge or tiny) nonnegative bound, carried in log
// space with an honest truncation ledger.
struct BoundValue {
    double log_value = 0.0;        // natural log; +inf marks divergence
    int terms_used = 0;            // explicit series terms summed
    double truncation_bound = 0.0; // analytic bound on the omitted tail (value units)
    bool vacuous = false;          // value >= 1 or divergent
    std::vector<double> term_logs; // per-term ledger for reproducibility audits

    double value() const;
};

// JSON object {log_value, value, vacuous, terms_used, truncation_bound};
// infinities serialize as the strings "inf"/"-inf".
std::string bound_value_json(const BoundValue& bv);

// 2 * sum_{n >= n_m} (1 + lambda sigma 2^{2^{n-1}}) exp(-c lambda z 2^n ln 2),
// evaluated term-by-term in log space. Diverges (terms do not vanish) exactly
// when c*lambda*z <= 1/2; otherwise sums until the analytic geometric tail
// bound drops below 1e-16 of the partial sum and records that bound.
BoundValue kmt_exponential_bound(double lambda, double sigma, double z,
                                 std::uint64_t m, double c);

// MGF bound for the coupled maximum: 1 + lambda * sqrt(n) * sigma.
double sakhanenko_exp_mgf_bound(double lambda, std::uint64_t n, double sigma);

// Companion tail evaluation (1 + lambda sqrt(n) sigma) * exp(-c lambda z).
double sakhanenko_exp_tail_bound(double lambda, std::uint64_t n, double sigma,
                                 double z, double c = 1.0);

// Power-moment bound for the coupled maximum: Cs * sum of the q-th moments.
double sakhanenko_poly_bound(double q, const std::vector<double>& moments,
                             double Cs);

// (Cq / epsilon^q) * (T_m + (ubar_a[n_m]/a[n_m])^q * U) with n_m from the
// block partition of u. a and ubar_a are 1-based sequences (entry k at index
// k-1) covering at least the weight horizon; requires a, ubar_a positive
// nondecreasing, ubar_a <= a, and ubar_a/a nonincreasing.
BoundValue power_bound(const WeightSequence& u, const std::vector<double>& a,
                       const std::vector<double>& ubar_a, std::size_t m,
                       double epsilon, double Cq, double q);

// Constant sum_{k>=1} coverage for k^{-2/q} partial sums against the
// integral: returns q/(q-2), the natural choice of Cq in the variance
// comparison below.
double k_power_tail_constant(double q);

struct BoundComparison {
    double lhs = 0.0;
    double rhs = 0.0;
};

// lhs = sum_{k=m}^{horizon} (sigma - sigma_tilde_k)^2 / k^{2/q} plus the
// analytic tail majorant 4*Cq*tail_moment(q, horizon+1), with
// sigma_tilde_k^2 = truncated_variance(spec, k^{1/q});
// rhs = 4 * Cq * tail_moment(spec, q, m).
BoundComparison variance_diff_bound(const DistributionSpec& spec, double q,
                                    std::uint64_t m, double Cq,
                                    std::uint64_t horizon);

}  // namespace kmt
