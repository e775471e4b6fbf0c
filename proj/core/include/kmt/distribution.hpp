// Centered distribution families and their moment functionals: the numeric
// substrate for every regularity computation and bound evaluation. All six
// families are mean-zero with finite positive variance; +infinity is a
// first-class return value for divergent moments, never an error.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace kmt {

enum class Family {
    rademacher,                // +-1 with probability 1/2
    centered_uniform,          // uniform on [-h, h]
    centered_gaussian,         // N(0, sigma^2)
    centered_laplace,          // density e^{-|x|/beta}/(2 beta)
    centered_two_point,        // atoms solved for mean 0, given variance
    centered_pareto_symmetric  // symmetric power tail |x|^{-kappa-1}, |x|>=scale
};

struct DistributionSpec {
    Family family = Family::rademacher;
    // Family parameters (only the relevant ones are read):
    double h = 1.0;         // centered_uniform halfwidth
    double sigma = 1.0;     // centered_gaussian standard deviation
    double beta = 1.0;      // centered_laplace scale
    double p = 0.5;         // centered_two_point P(X = x_plus)
    double variance = 1.0;  // centered_two_point variance
    double kappa = 3.0;     // centered_pareto_symmetric tail exponent (> 2)
    double scale = 1.0;     // centered_pareto_symmetric scale (> 0)

    static DistributionSpec rademacher();
    static DistributionSpec centered_uniform(double h);
    static DistributionSpec centered_gaussian(double sigma);
    static DistributionSpec centered_laplace(double beta);
    static DistributionSpec centered_two_point(double p, double variance);
    static DistributionSpec centered_pareto_symmetric(double kappa, double scale);

    std::string family_name() const;
};

// JSON interface, schema {"family": string, "params": {name: number}}.
// Throws std::invalid_argument on malformed input or bad parameters.
DistributionSpec parse_spec_json(const std::string& text);
std::string spec_to_json(const DistributionSpec& spec);

// --- law basics ---------------------------------------------------------

double variance(const DistributionSpec& spec);
double std_dev(const DistributionSpec& spec);
// Essential supremum of |X|; +infinity for unbounded families.
double ess_sup(const DistributionSpec& spec);
bool heavy_tail(const DistributionSpec& spec);  // no finite E e^{t|X|}, t>0

// CDF F(x), its left limit F(x-), and the atom mass P(X = x).
double cdf(const DistributionSpec& spec, double x);
double cdf_left(const DistributionSpec& spec, double x);
double atom_mass(const DistributionSpec& spec, double x);
// Generalized inverse of the CDF on u in (0,1).
double quantile(const DistributionSpec& spec, double u);

// --- moment functionals --------------------------------------------------

// E|X|^q for q >= 1; +infinity when q >= kappa for the Pareto family.
double abs_moment(const DistributionSpec& spec, double q);
// log E|X|^q, stable for large q (used by the Bernstein scan); -infinity
// never occurs (variance > 0), +infinity when the moment diverges.
double log_abs_moment(const DistributionSpec& spec, double q);
// E e^{t|X|} for t > 0; +infinity where the integral diverges.
double exp_abs_moment(const DistributionSpec& spec, double t);
// E[|X|^3 e^{lambda |X|}] for lambda >= 0; +infinity allowed.
double tilted_third(const DistributionSpec& spec, double lambda);
// E[|X|^q 1{|X|^q > m}] for q > 2, m >= 0.
double tail_moment(const DistributionSpec& spec, double q, double m);
// Var(X 1{|X| <= K}) for K > 0 (mean term included for asymmetric atoms).
double truncated_variance(const DistributionSpec& spec, double K);

struct MomentProfile {
    double variance = 0.0;
    std::map<double, double> abs_moments;  // q -> E|X|^q
    std::map<double, double> exp_moments;  // t -> E e^{t|X|} (may be +inf)
    std::string method;                    // "analytic" for every family here
};

MomentProfile moment_profile(const DistributionSpec& spec,
                             const std::vector<double>& q_grid,
                             const std::vector<double>& t_grid);

// --- sampling ------------------------------------------------------------

// n i.i.d. draws by inverse transform; identical (spec, n, seed) give
// bit-identical output on a fixed toolchain.
std::vector<double> sample(const DistributionSpec& spec, std::size_t n,
                           std::uint64_t seed);

}  // namespace kmt
