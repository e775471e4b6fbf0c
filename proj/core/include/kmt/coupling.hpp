#pragma once
// Explicit couplings (X, Y) with exact marginals - X i.i.d. from a spec,
// Y i.i.d. Gaussian(0, Var(X)) - the discrepancy process Lambda_k =
// sum_{i<=k}(X_i - Y_i), and Monte Carlo estimation of weighted-supremum
// tail probabilities. These are surrogate constructions with provably exact
// marginals; empirical tails describe the surrogate coupling only.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "kmt/distribution.hpp"

namespace kmt {

enum class Strategy { independent, per_variable_quantile, blockwise_sum_quantile };

const char* strategy_name(Strategy s);
Strategy parse_strategy(const std::string& name);

struct CouplingRun {
    std::vector<double> x_path;       // X_1..X_K at indices 0..K-1
    std::vector<double> y_path;
    std::vector<double> lambda_path;  // running sum of (x - y), exact recurrence
    std::uint64_t seed = 0;
    Strategy strategy = Strategy::independent;
    DistributionSpec spec;
};

// Build one coupled pair of paths of length K. Streams: mix_seed(seed, 0)
// drives X, mix_seed(seed, 1) drives the auxiliary randomness for Y, so runs
// with equal seeds share the X path across strategies.
//   independent:             Y fresh i.i.d. Gaussian.
//   per_variable_quantile:   Y_i = sigma * PhiInv(F(X_i^-) + V_i * p(X_i)),
//                            monotone quantile coupling with atom smoothing.
//   blockwise_sum_quantile:  {1..K} split by the doubly exponential epoch
//                            scheme; block sums quantile-coupled, paths
//                            filled from the exact conditional law given the
//                            sum (sequential sampling for Rademacher,
//                            Gaussian bridge otherwise). Rademacher and
//                            CenteredGaussian only.
CouplingRun couple_paths(const DistributionSpec& spec, std::size_t K,
                         Strategy strategy, std::uint64_t seed);

// Weight for the discrepancy supremum: w(k) = log k or w(k) = k^{1/q}.
struct SupWeight {
    enum class Kind { log_k, k_power };
    Kind kind = Kind::log_k;
    double q = 3.0;  // only used by k_power

    double at(std::size_t k) const;
};

// max over m <= k <= K of |lambda_k| / w(k); requires m >= 2 for the log
// weight (log 1 = 0) and m <= K.
double discrepancy_sup(const CouplingRun& run, const SupWeight& weight,
                       std::size_t m);

struct TailEstimate {
    double p_hat = 0.0;
    double ci_low = 0.0;   // Wilson 95% interval
    double ci_high = 0.0;
    int reps = 0;
    std::uint64_t exceed_count = 0;
};

// Fraction of replications with discrepancy_sup >= z. Replication r uses
// child seed mix_seed(seed, r); the result is bit-identical for fixed inputs
// regardless of the thread count.
TailEstimate tail_estimate(const DistributionSpec& spec, Strategy strategy,
                           const SupWeight& weight, std::size_t m,
                           std::size_t K, double z, int reps,
                           std::uint64_t seed, int threads = 1);

// CSV columns (k, x, y, lambda).
std::string coupling_run_csv(const CouplingRun& run);

// JSON {p_hat, ci_low, ci_high, reps, params}.
std::string tail_estimate_json(const TailEstimate& est,
                               const DistributionSpec& spec, Strategy strategy,
                               const SupWeight& weight, std::size_t m,
                               std::size_t K, double z, std::uint64_t seed);

}  // namespace kmt
