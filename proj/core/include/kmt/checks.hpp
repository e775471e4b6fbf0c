#pragma once
// Deterministic checkers for the self-contained inequalities of the theory,
// usable directly as property-test predicates. Each check computes both
// sides, reports slack = rhs - lhs, and echoes its inputs in a JSON witness.

#include <string>
#include <vector>

#include "kmt/distribution.hpp"

namespace kmt {

struct CheckResult {
    bool holds = false;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;    // rhs - lhs
    std::string witness;   // JSON input echo plus notes
};

// holds <=> slack >= -1e-12 * max(1, |rhs|).
CheckResult make_check(double lhs, double rhs, std::string witness);

// Maximal weighted sum inequality, implemented in the form its proof
// establishes: max_{m<k<=K} |sum_{i=m+1}^k b_i| / a_k
//          <= 2 max_{m<k<=K} |sum_{i=m+1}^k b_i / a_i|.
// (The version with inner sums started at i=1 fails for m > 0; see the
// witness note and the regression test with an explicit counterexample.)
CheckResult maximal_weighted_check(const std::vector<double>& a,
                                   const std::vector<double>& b, std::size_t m,
                                   std::size_t K);

struct DiscreteLaw {
    std::vector<double> support;
    std::vector<double> prob;
};

// E|X+Y|^p <= 2^{p-1} (E|X|^p + E|Y|^p) for independent X, Y by exact
// product-support enumeration; also folds in the centering corollary
// E|Y - EY|^p <= 2^p E|Y|^p. lhs/rhs report the main inequality; the witness
// carries the corollary pair.
CheckResult moment_split_check(const DiscreteLaw& lawX, const DiscreteLaw& lawY,
                               double p);

// E|X|^q <= C t^{-q} q! with C = exp_abs_moment(spec, t).
CheckResult poly_from_exp_check(const DistributionSpec& spec, double t, int q);

// Truncated-weight sum: sum_{k=1}^n |x| 1{|x|^q >= k} k^{-1/q}.
// The bound this asserts is the provable q/(q-1) (|x|^q + 1); the literature
// statement |x|^q + 1 (without the integral-comparison factor) is evaluated
// too and its verdict recorded in the witness, because exact summation at
// (x=2, q=3, n=100) gives 10.5498... > 9, refuting it.
CheckResult truncation_sum_check(double x, double q, std::size_t n);

// Exact big-integer verification of the epoch growth identities
// D(n-1) >= sqrt(d(n)) and D(n-1) <= d(n) for n in [n_lo, n_hi]
// (two results per n). lhs/rhs are reported in log2 units; `holds` comes
// from the exact integer comparison. Requires 2 <= n_lo <= n_hi <= 20.
std::vector<CheckResult> epoch_bound_identity_checks(int n_lo, int n_hi);

// Batch mode: `requests` is a JSON array of objects {"op": <name>, ...args}.
// Returns a JSON array of results; `all_hold` (if given) receives whether
// every check held.
std::string run_check_batch(const std::string& requests, bool* all_hold = nullptr);

std::string check_result_json(const CheckResult& r);

}  // namespace kmt
