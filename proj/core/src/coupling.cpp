#include "kmt/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "kmt/csv.hpp"
#include "kmt/epoch.hpp"
#include "kmt/rng.hpp"

namespace kmt {

namespace {
constexpr double kLn2 = 0.6931471805599453094;

// Keep a cumulative probability strictly inside the open unit interval so it
// is a valid quantile-function argument.
double clamp_open_unit(double u) {
    return std::min(std::max(u, 0x1.0p-53), 1.0 - 0x1.0p-53);
}

// Draw H ~ Binomial(L, 1/2) by walking the CDF; also reports P(H < h) and
// P(H = h) for the atom-smoothed quantile coupling of the block sum.
struct BinomDraw {
    std::size_t h = 0;
    double cum_before = 0.0;
    double pmf_at = 0.0;
};

BinomDraw binom_half_draw(Rng& rng, std::size_t L) {
    const double u = rng.uniform();
    const double lgL = std::lgamma(static_cast<double>(L) + 1.0);
    double cum = 0.0;
    BinomDraw d;
    for (std::size_t j = 0;; ++j) {
        const double jd = static_cast<double>(j);
        const double p = std::exp(lgL - std::lgamma(jd + 1.0) -
                                  std::lgamma(static_cast<double>(L - j) + 1.0) -
                                  static_cast<double>(L) * kLn2);
        if (cum + p >= u || j == L) {
            d.h = j;
            d.cum_before = cum;
            d.pmf_at = p;
            return d;
        }
        cum += p;
    }
}

// Fill block entries [lo, lo+L) of y with i.i.d. Gaussian(0, sigma^2)
// conditioned to sum to block_sum (mean-adjusted bridge).
void gaussian_bridge_fill(std::vector<double>& y, std::size_t lo, std::size_t L,
                          double sigma, double block_sum, Rng& rng) {
    double mean = 0.0;
    for (std::size_t i = 0; i < L; ++i) {
        y[lo + i] = sigma * norm_quantile(rng.uniform());
        mean += y[lo + i];
    }
    mean /= static_cast<double>(L);
    const double shift = block_sum / static_cast<double>(L);
    for (std::size_t i = 0; i < L; ++i) y[lo + i] += shift - mean;
}

}  // namespace

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::independent: return "independent";
        case Strategy::per_variable_quantile: return "per_variable_quantile";
        case Strategy::blockwise_sum_quantile: return "blockwise_sum_quantile";
    }
    throw std::logic_error("kmt::strategy_name: unknown strategy");
}

Strategy parse_strategy(const std::string& name) {
    if (name == "independent") return Strategy::independent;
    if (name == "per_variable_quantile") return Strategy::per_variable_quantile;
    if (name == "blockwise_sum_quantile") return Strategy::blockwise_sum_quantile;
    throw std::invalid_argument("kmt::parse_strategy: unknown strategy '" + name +
                                "'");
}

CouplingRun couple_paths(const DistributionSpec& spec, std::size_t K,
                         Strategy strategy, std::uint64_t seed) {
    if (K < 1) throw std::domain_error("kmt::couple_paths: K must be >= 1");
    if (strategy == Strategy::blockwise_sum_quantile &&
        spec.family != Family::rademacher && spec.family != Family::centered_gaussian)
        throw std::domain_error(
            "kmt::couple_paths: blockwise_sum_quantile supports only Rademacher and "
            "CenteredGaussian");

    CouplingRun run;
    run.seed = seed;
    run.strategy = strategy;
    run.spec = spec;
    run.x_path.resize(K);
    run.y_path.resize(K);
    run.lambda_path.resize(K);

    const double sigma = std_dev(spec);
    Rng rx(mix_seed(seed, 0));  // drives X
    Rng ra(mix_seed(seed, 1));  // auxiliary randomness for Y

    switch (strategy) {
        case Strategy::independent:
            for (std::size_t i = 0; i < K; ++i) {
                run.x_path[i] = quantile(spec, rx.uniform());
                run.y_path[i] = sigma * norm_quantile(ra.uniform());
            }
            break;
        case Strategy::per_variable_quantile:
            for (std::size_t i = 0; i < K; ++i) {
                const double x = quantile(spec, rx.uniform());
                const double v = ra.uniform();
                const double uy =
                    clamp_open_unit(cdf_left(spec, x) + v * atom_mass(spec, x));
                run.x_path[i] = x;
                run.y_path[i] = sigma * norm_quantile(uy);
            }
            break;
        case Strategy::blockwise_sum_quantile: {
            std::size_t lo = 0;  // 0-based start of the current block
            for (int n = 1; lo < K; ++n) {
                const std::uint64_t d = n <= 5 ? d_exact(n) : ~0ULL;
                const std::size_t L =
                    static_cast<std::size_t>(std::min<std::uint64_t>(d, K - lo));
                if (spec.family == Family::rademacher) {
                    const BinomDraw bd = binom_half_draw(rx, L);
                    // Exact conditional arrangement of bd.h plus-ones.
                    std::size_t h_rem = bd.h, n_rem = L;
                    for (std::size_t i = 0; i < L; ++i, --n_rem) {
                        const bool plus =
                            rx.uniform() * static_cast<double>(n_rem) <
                            static_cast<double>(h_rem);
                        run.x_path[lo + i] = plus ? 1.0 : -1.0;
                        if (plus) --h_rem;
                    }
                    const double us =
                        clamp_open_unit(bd.cum_before + ra.uniform() * bd.pmf_at);
                    const double sy =
                        std::sqrt(static_cast<double>(L)) * norm_quantile(us);
                    gaussian_bridge_fill(run.y_path, lo, L, 1.0, sy, ra);
                } else {  // centered_gaussian
                    const double sx = sigma * std::sqrt(static_cast<double>(L)) *
                                      norm_quantile(rx.uniform());
                    gaussian_bridge_fill(run.x_path, lo, L, sigma, sx, rx);
                    gaussian_bridge_fill(run.y_path, lo, L, sigma, sx, ra);
                }
                lo += L;
            }
            break;
        }
    }

    double lam = 0.0;
    for (std::size_t i = 0; i < K; ++i) {
        lam += run.x_path[i] - run.y_path[i];
        run.lambda_path[i] = lam;
    }
    return run;
}

double SupWeight::at(std::size_t k) const {
    switch (kind) {
        case Kind::log_k: return std::log(static_cast<double>(k));
        case Kind::k_power: return std::pow(static_cast<double>(k), 1.0 / q);
    }
    throw std::logic_error("kmt::SupWeight::at: unknown kind");
}

double discrepancy_sup(const CouplingRun& run, const SupWeight& weight,
                       std::size_t m) {
    const std::size_t K = run.lambda_path.size();
    if (m < 1 || m > K)
        throw std::domain_error("kmt::discrepancy_sup: m out of range");
    if (weight.kind == SupWeight::Kind::log_k && m < 2)
        throw std::domain_error("kmt::discrepancy_sup: log weight requires m >= 2");
    if (weight.kind == SupWeight::Kind::k_power && !(weight.q > 0.0))
        throw std::domain_error("kmt::discrepancy_sup: k_power weight requires q > 0");
    double sup = 0.0;
    for (std::size_t k = m; k <= K; ++k)
        sup = std::max(sup, std::fabs(run.lambda_path[k - 1]) / weight.at(k));
    return sup;
}

TailEstimate tail_estimate(const DistributionSpec& spec, Strategy strategy,
                           const SupWeight& weight, std::size_t m,
                           std::size_t K, double z, int reps,
                           std::uint64_t seed, int threads) {
    if (reps < 100) throw std::domain_error("kmt::tail_estimate: reps must be >= 100");
    if (!(z >= 0.0)) throw std::domain_error("kmt::tail_estimate: z must be >= 0");
    if (threads < 1) threads = 1;
    threads = std::min<int>(threads, reps);

    std::vector<unsigned char> exceed(static_cast<std::size_t>(reps), 0);
    auto worker = [&](int r_lo, int r_hi) {
        for (int r = r_lo; r < r_hi; ++r) {
            const CouplingRun run =
                couple_paths(spec, K, strategy, mix_seed(seed, static_cast<std::uint64_t>(r)));
            exceed[static_cast<std::size_t>(r)] =
                discrepancy_sup(run, weight, m) >= z ? 1 : 0;
        }
    };
    if (threads == 1) {
        worker(0, reps);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (reps + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int lo = t * chunk, hi = std::min(reps, lo + chunk);
            if (lo < hi) pool.emplace_back(worker, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    TailEstimate est;
    est.reps = reps;
    for (unsigned char e : exceed) est.exceed_count += e;
    const double n = static_cast<double>(reps);
    const double p = static_cast<double>(est.exceed_count) / n;
    est.p_hat = p;
    const double zc = 1.959963984540054;  // two-sided 95% normal quantile
    const double denom = 1.0 + zc * zc / n;
    const double center = (p + zc * zc / (2.0 * n)) / denom;
    const double half =
        zc * std::sqrt(p * (1.0 - p) / n + zc * zc / (4.0 * n * n)) / denom;
    est.ci_low = std::max(0.0, center - half);
    est.ci_high = std::min(1.0, center + half);
    return est;
}

std::string coupling_run_csv(const CouplingRun& run) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(run.x_path.size());
    for (std::size_t k = 1; k <= run.x_path.size(); ++k)
        rows.push_back({std::to_string(k), format_double(run.x_path[k - 1]),
                        format_double(run.y_path[k - 1]),
                        format_double(run.lambda_path[k - 1])});
    return csv_document({"k", "x", "y", "lambda"}, rows);
}

std::string tail_estimate_json(const TailEstimate& est,
                               const DistributionSpec& spec, Strategy strategy,
                               const SupWeight& weight, std::size_t m,
                               std::size_t K, double z, std::uint64_t seed) {
    nlohmann::json params;
    params["spec"] = nlohmann::json::parse(spec_to_json(spec));
    params["strategy"] = strategy_name(strategy);
    params["weight"] = weight.kind == SupWeight::Kind::log_k
                           ? nlohmann::json("log_k")
                           : nlohmann::json("k_power");
    if (weight.kind == SupWeight::Kind::k_power) params["q"] = weight.q;
    params["m"] = m;
    params["K"] = K;
    params["z"] = z;
    params["seed"] = seed;
    nlohmann::json j{{"p_hat", est.p_hat},   {"ci_low", est.ci_low},
                     {"ci_high", est.ci_high}, {"reps", est.reps},
                     {"params", params}};
    return j.dump(2);
}

}  // namespace kmt
