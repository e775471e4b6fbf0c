#include "kmt/distribution.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "kmt/rng.hpp"

namespace kmt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogSqrtPi = 0.5723649429247000870;  // log sqrt(pi)
constexpr double kLn2 = 0.6931471805599453094;

void validate(const DistributionSpec& s) {
    switch (s.family) {
        case Family::rademacher:
            return;
        case Family::centered_uniform:
            if (!(s.h > 0.0)) throw std::invalid_argument("kmt::DistributionSpec: CenteredUniform needs h > 0");
            return;
        case Family::centered_gaussian:
            if (!(s.sigma > 0.0)) throw std::invalid_argument("kmt::DistributionSpec: CenteredGaussian needs sigma > 0");
            return;
        case Family::centered_laplace:
            if (!(s.beta > 0.0)) throw std::invalid_argument("kmt::DistributionSpec: CenteredLaplace needs beta > 0");
            return;
        case Family::centered_two_point:
            if (!(s.p > 0.0 && s.p < 1.0)) throw std::invalid_argument("kmt::DistributionSpec: CenteredTwoPoint needs p in (0,1)");
            if (!(s.variance > 0.0)) throw std::invalid_argument("kmt::DistributionSpec: CenteredTwoPoint needs variance > 0");
            return;
        case Family::centered_pareto_symmetric:
            if (!(s.kappa > 2.0)) throw std::invalid_argument("kmt::DistributionSpec: CenteredParetoSymmetric needs kappa > 2");
            if (!(s.scale > 0.0)) throw std::invalid_argument("kmt::DistributionSpec: CenteredParetoSymmetric needs scale > 0");
            return;
    }
    throw std::invalid_argument("kmt::DistributionSpec: unknown family");
}

// Two-point support solved from mean 0 and the given variance:
// x_plus = sigma*sqrt((1-p)/p) with prob p, x_minus = -sigma*sqrt(p/(1-p)).
struct TwoPointAtoms {
    double x_plus, x_minus;
};

TwoPointAtoms two_point_atoms(const DistributionSpec& s) {
    const double sd = std::sqrt(s.variance);
    return {sd * std::sqrt((1.0 - s.p) / s.p), -sd * std::sqrt(s.p / (1.0 - s.p))};
}

double log_sum_exp(double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// (1/h) * integral_0^h x^3 e^{lx} dx; series for small lh, closed form else.
double uniform_tilted_third(double h, double l) {
    const double lh = l * h;
    if (lh < 0.5) {
        double term = h * h * h;  // j = 0: h^{3+j} l^j / j!
        double sum = term / 4.0;
        for (int j = 1; j < 40; ++j) {
            term *= lh / j;
            const double add = term / (4.0 + j);
            sum += add;
            if (add < 1e-18 * sum) break;
        }
        return sum;
    }
    const double l2 = l * l, l3 = l2 * l, l4 = l2 * l2;
    return std::exp(lh) * (h * h * h / l - 3.0 * h * h / l2 + 6.0 * h / l3 - 6.0 / l4) / h +
           6.0 / (l4 * h);
}

}  // namespace

DistributionSpec DistributionSpec::rademacher() {
    DistributionSpec s;
    s.family = Family::rademacher;
    return s;
}
DistributionSpec DistributionSpec::centered_uniform(double h) {
    DistributionSpec s;
    s.family = Family::centered_uniform;
    s.h = h;
    validate(s);
    return s;
}
DistributionSpec DistributionSpec::centered_gaussian(double sigma) {
    DistributionSpec s;
    s.family = Family::centered_gaussian;
    s.sigma = sigma;
    validate(s);
    return s;
}
DistributionSpec DistributionSpec::centered_laplace(double beta) {
    DistributionSpec s;
    s.family = Family::centered_laplace;
    s.beta = beta;
    validate(s);
    return s;
}
DistributionSpec DistributionSpec::centered_two_point(double p, double variance) {
    DistributionSpec s;
    s.family = Family::centered_two_point;
    s.p = p;
    s.variance = variance;
    validate(s);
    return s;
}
DistributionSpec DistributionSpec::centered_pareto_symmetric(double kappa, double scale) {
    DistributionSpec s;
    s.family = Family::centered_pareto_symmetric;
    s.kappa = kappa;
    s.scale = scale;
    validate(s);
    return s;
}

std::string DistributionSpec::family_name() const {
    switch (family) {
        case Family::rademacher: return "Rademacher";
        case Family::centered_uniform: return "CenteredUniform";
        case Family::centered_gaussian: return "CenteredGaussian";
        case Family::centered_laplace: return "CenteredLaplace";
        case Family::centered_two_point: return "CenteredTwoPoint";
        case Family::centered_pareto_symmetric: return "CenteredParetoSymmetric";
    }
    return "?";
}

DistributionSpec parse_spec_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("kmt::parse_spec_json: bad JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("family"))
        throw std::invalid_argument("kmt::parse_spec_json: expected {\"family\",...}");
    const std::string fam = j["family"].get<std::string>();
    auto param = [&](const char* name) -> double {
        if (!j.contains("params") || !j["params"].contains(name))
            throw std::invalid_argument(std::string("kmt::parse_spec_json: missing param ") + name);
        return j["params"][name].get<double>();
    };
    DistributionSpec s;
    if (fam == "Rademacher") {
        s = DistributionSpec::rademacher();
    } else if (fam == "CenteredUniform") {
        s = DistributionSpec::centered_uniform(param("h"));
    } else if (fam == "CenteredGaussian") {
        s = DistributionSpec::centered_gaussian(param("sigma"));
    } else if (fam == "CenteredLaplace") {
        s = DistributionSpec::centered_laplace(param("beta"));
    } else if (fam == "CenteredTwoPoint") {
        s = DistributionSpec::centered_two_point(param("p"), param("variance"));
    } else if (fam == "CenteredParetoSymmetric") {
        s = DistributionSpec::centered_pareto_symmetric(param("kappa"), param("scale"));
    } else {
        throw std::invalid_argument("kmt::parse_spec_json: unknown family " + fam);
    }
    return s;
}

std::string spec_to_json(const DistributionSpec& spec) {
    nlohmann::json params = nlohmann::json::object();
    switch (spec.family) {
        case Family::rademacher: break;
        case Family::centered_uniform: params["h"] = spec.h; break;
        case Family::centered_gaussian: params["sigma"] = spec.sigma; break;
        case Family::centered_laplace: params["beta"] = spec.beta; break;
        case Family::centered_two_point:
            params["p"] = spec.p;
            params["variance"] = spec.variance;
            break;
        case Family::centered_pareto_symmetric:
            params["kappa"] = spec.kappa;
            params["scale"] = spec.scale;
            break;
    }
    nlohmann::json j{{"family", spec.family_name()}, {"params", params}};
    return j.dump();
}

double variance(const DistributionSpec& s) {
    validate(s);
    switch (s.family) {
        case Family::rademacher: return 1.0;
        case Family::centered_uniform: return s.h * s.h / 3.0;
        case Family::centered_gaussian: return s.sigma * s.sigma;
        case Family::centered_laplace: return 2.0 * s.beta * s.beta;
        case Family::centered_two_point: return s.variance;
        case Family::centered_pareto_symmetric:
            return s.kappa * s.scale * s.scale / (s.kappa - 2.0);
    }
    return 0.0;
}

double std_dev(const DistributionSpec& s) { return std::sqrt(variance(s)); }

double ess_sup(const DistributionSpec& s) {
    switch (s.family) {
        case Family::rademacher: return 1.0;
        case Family::centered_uniform: return s.h;
        case Family::centered_two_point: {
            const auto a = two_point_atoms(s);
            return std::max(a.x_plus, -a.x_minus);
        }
        default: return kInf;
    }
}

bool heavy_tail(const DistributionSpec& s) {
    return s.family == Family::centered_pareto_symmetric;
}

double cdf(const DistributionSpec& s, double x) {
    validate(s);
    switch (s.family) {
        case Family::rademacher:
            return x < -1.0 ? 0.0 : (x < 1.0 ? 0.5 : 1.0);
        case Family::centered_uniform:
            if (x <= -s.h) return 0.0;
            if (x >= s.h) return 1.0;
            return (x + s.h) / (2.0 * s.h);
        case Family::centered_gaussian:
            return norm_cdf(x / s.sigma);
        case Family::centered_laplace:
            return x < 0.0 ? 0.5 * std::exp(x / s.beta)
                           : 1.0 - 0.5 * std::exp(-x / s.beta);
        case Family::centered_two_point: {
            const auto a = two_point_atoms(s);
            if (x < a.x_minus) return 0.0;
            if (x < a.x_plus) return 1.0 - s.p;
            return 1.0;
        }
        case Family::centered_pareto_symmetric: {
            if (x <= -s.scale) return 0.5 * std::pow(s.scale / -x, s.kappa);
            if (x < s.scale) return 0.5;
            return 1.0 - 0.5 * std::pow(s.scale / x, s.kappa);
        }
    }
    return 0.0;
}

double cdf_left(const DistributionSpec& s, double x) {
    return cdf(s, x) - atom_mass(s, x);
}

double atom_mass(const DistributionSpec& s, double x) {
    switch (s.family) {
        case Family::rademacher:
            return (x == 1.0 || x == -1.0) ? 0.5 : 0.0;
        case Family::centered_two_point: {
            const auto a = two_point_atoms(s);
            if (x == a.x_plus) return s.p;
            if (x == a.x_minus) return 1.0 - s.p;
            return 0.0;
        }
        default:
            return 0.0;
    }
}

double quantile(const DistributionSpec& s, double u) {
    validate(s);
    if (!(u > 0.0 && u < 1.0))
        throw std::domain_error("kmt::quantile: u must lie in (0,1)");
    switch (s.family) {
        case Family::rademacher:
            return u <= 0.5 ? -1.0 : 1.0;
        case Family::centered_uniform:
            return s.h * (2.0 * u - 1.0);
        case Family::centered_gaussian:
            return s.sigma * norm_quantile(u);
        case Family::centered_laplace:
            return u < 0.5 ? s.beta * std::log(2.0 * u)
                           : -s.beta * std::log(2.0 * (1.0 - u));
        case Family::centered_two_point: {
            const auto a = two_point_atoms(s);
            return u <= 1.0 - s.p ? a.x_minus : a.x_plus;
        }
        case Family::centered_pareto_symmetric:
            return u <= 0.5 ? -s.scale * std::pow(2.0 * u, -1.0 / s.kappa)
                            : s.scale * std::pow(2.0 * (1.0 - u), -1.0 / s.kappa);
    }
    return 0.0;
}

double abs_moment(const DistributionSpec& s, double q) {
    validate(s);
    if (!(q >= 1.0)) throw std::domain_error("kmt::abs_moment: q must be >= 1");
    switch (s.family) {
        case Family::rademacher: return 1.0;
        case Family::centered_uniform: return std::pow(s.h, q) / (q + 1.0);
        case Family::centered_gaussian:
            // E|X|^q = 2^{q/2} Gamma((q+1)/2) / sqrt(pi) * sigma^q
            return std::exp(log_abs_moment(s, q));
        case Family::centered_laplace:
            return std::exp(log_abs_moment(s, q));
        case Family::centered_two_point: {
            const auto a = two_point_atoms(s);
            return s.p * std::pow(a.x_plus, q) + (1.0 - s.p) * std::pow(-a.x_minus, q);
        }
        case Family::centered_pareto_symmetric:
            if (q >= s.kappa) return kInf;
            return s.kappa * std::pow(s.scale, q) / (s.kappa - q);
    }
    return 0.0;
}

double log_abs_moment(const DistributionSpec& s, double q) {
    validate(s);
    if (!(q >= 1.0)) throw std::domain_error("kmt::log_abs_moment: q must be >= 1");
    switch (s.family) {
        case Family::rademacher: return 0.0;
        case Family::centered_uniform:
            return q * std::log(s.h) - std::log(q + 1.0);
        case Family::centered_gaussian:
            return 0.5 * q * kLn2 + std::lgamma(0.5 * (q + 1.0)) - kLogSqrtPi +
                   q * std::log(s.sigma);
        case Family::centered_laplace:
            return q * std::log(s.beta) + std::lgamma(q + 1.0);
        case Family::centered_two_point: {
            const auto a = two_point_atoms(s);
            return log_sum_exp(std::log(s.p) + q * std::log(a.x_plus),
                               std::log(1.0 - s.p) + q * std::log(-a.x_minus));
        }
        case Family::centered_pareto_symmetric:
            if (q >= s.kappa) return kInf;
            return std::log(s.kappa) + q * std::log(s.scale) - std::log(s.kappa - q);
    }
    return 0.0;
}

double exp_abs_moment(const DistributionSpec& s, double t) {
    validate(s);
    if (!(t > 0.0)) throw std::domain_error("kmt::exp_abs_moment: t must be > 0");
    switch (s.family) {
        case Family::rademacher: return std::exp(t);
        case Family::centered_uniform: return std::expm1(t * s.h) / (t * s.h);
        case Family::centered_gaussian: {
            const double a = t * s.sigma;
            return 2.0 * std::exp(0.5 * a * a) * norm_cdf(a);
        }
        case Family::centered_laplace:
            return t * s.beta >= 1.0 ? kInf : 1.0 / (1.0 - t * s.beta);
        case Family::centered_two_point: {
            const auto a = two_point_atoms(s);
            return s.p * std::exp(t * a.x_plus) + (1.0 - s.p) * std::exp(-t * a.x_minus);
        }
        case Family::centered_pareto_symmetric:
            return kInf;
    }
    return 0.0;
}

double tilted_third(const DistributionSpec& s, double lambda) {
    validate(s);
    if (!(lambda >= 0.0)) throw std::domain_error("kmt::tilted_third: lambda must be >= 0");
    switch (s.family) {
        case Family::rademacher: return std::exp(lambda);
        case Family::centered_uniform: return uniform_tilted_third(s.h, lambda);
        case Family::centered_gaussian: {
            // 2 sigma^3 e^{a^2/2} [ (a^2+2) phi(a) + (a^3+3a) Phi(a) ], a = sigma*lambda
            const double a = s.sigma * lambda;
            return 2.0 * s.sigma * s.sigma * s.sigma * std::exp(0.5 * a * a) *
                   ((a * a + 2.0) * norm_pdf(a) + (a * a * a + 3.0 * a) * norm_cdf(a));
        }
        case Family::centered_laplace: {
            // |X| ~ Exp(1/beta): E Z^3 e^{lZ} = 6 beta^3 / (1 - l beta)^4
            const double r = 1.0 - lambda * s.beta;
            if (r <= 0.0) return kInf;
            return 6.0 * s.beta * s.beta * s.beta / (r * r * r * r);
        }
        case Family::centered_two_point: {
            const auto a = two_point_atoms(s);
            const double ap = a.x_plus, am = -a.x_minus;
            return s.p * ap * ap * ap * std::exp(lambda * ap) +
                   (1.0 - s.p) * am * am * am * std::exp(lambda * am);
        }
        case Family::centered_pareto_symmetric:
            if (lambda > 0.0) return kInf;
            return s.kappa > 3.0 ? s.kappa * std::pow(s.scale, 3.0) / (s.kappa - 3.0) : kInf;
    }
    return 0.0;
}

double tail_moment(const DistributionSpec& s, double q, double m) {
    validate(s);
    if (!(q > 2.0)) throw std::domain_error("kmt::tail_moment: q must be > 2");
    if (!(m >= 0.0)) throw std::domain_error("kmt::tail_moment: m must be >= 0");
    const double xt = m == 0.0 ? 0.0 : std::pow(m, 1.0 / q);  // |X| > xt <=> |X|^q > m
    switch (s.family) {
        case Family::rademacher:
            return 1.0 > m ? 1.0 : 0.0;
        case Family::centered_uniform: {
            if (xt >= s.h) return 0.0;
            return (std::pow(s.h, q + 1.0) - std::pow(xt, q + 1.0)) / ((q + 1.0) * s.h);
        }
        case Family::centered_gaussian: {
            const double a = 0.5 * (q + 1.0);
            const double z = 0.5 * (xt / s.sigma) * (xt / s.sigma);
            return std::pow(s.sigma, q) * std::exp(0.5 * q * kLn2 - kLogSqrtPi) *
                   boost::math::tgamma(a, z);
        }
        case Family::centered_laplace:
            return std::pow(s.beta, q) * boost::math::tgamma(q + 1.0, xt / s.beta);
        case Family::centered_two_point: {
            const auto a = two_point_atoms(s);
            double acc = 0.0;
            const double mp = std::pow(a.x_plus, q), mm = std::pow(-a.x_minus, q);
            if (mp > m) acc += s.p * mp;
            if (mm > m) acc += (1.0 - s.p) * mm;
            return acc;
        }
        case Family::centered_pareto_symmetric: {
            if (q >= s.kappa) return kInf;
            const double lo = std::max(xt, s.scale);
            return s.kappa * std::pow(s.scale, s.kappa) * std::pow(lo, q - s.kappa) /
                   (s.kappa - q);
        }
    }
    return 0.0;
}

double truncated_variance(const DistributionSpec& s, double K) {
    validate(s);
    if (!(K > 0.0)) throw std::domain_error("kmt::truncated_variance: K must be > 0");
    switch (s.family) {
        case Family::rademacher:
            return K >= 1.0 ? 1.0 : 0.0;
        case Family::centered_uniform: {
            if (K >= s.h) return s.h * s.h / 3.0;
            return K * K * K / (3.0 * s.h);
        }
        case Family::centered_gaussian: {
            const double k = K / s.sigma;
            return s.sigma * s.sigma *
                   ((2.0 * norm_cdf(k) - 1.0) - 2.0 * k * norm_pdf(k));
        }
        case Family::centered_laplace: {
            const double u = K / s.beta;
            // E[X^2 1{|X|<=K}] = beta^2 * lower-incomplete Gamma(3, u)
            return s.beta * s.beta * (2.0 - std::exp(-u) * (u * u + 2.0 * u + 2.0));
        }
        case Family::centered_two_point: {
            const auto a = two_point_atoms(s);
            double m1 = 0.0, m2 = 0.0;
            if (a.x_plus <= K) {
                m1 += s.p * a.x_plus;
                m2 += s.p * a.x_plus * a.x_plus;
            }
            if (-a.x_minus <= K) {
                m1 += (1.0 - s.p) * a.x_minus;
                m2 += (1.0 - s.p) * a.x_minus * a.x_minus;
            }
            return m2 - m1 * m1;
        }
        case Family::centered_pareto_symmetric: {
            if (K < s.scale) return 0.0;
            const double r = s.kappa / (s.kappa - 2.0);
            return r * s.scale * s.scale *
                   (1.0 - std::pow(s.scale / K, s.kappa - 2.0));
        }
    }
    return 0.0;
}

MomentProfile moment_profile(const DistributionSpec& spec,
                             const std::vector<double>& q_grid,
                             const std::vector<double>& t_grid) {
    MomentProfile prof;
    prof.variance = variance(spec);
    prof.method = "analytic";
    for (double q : q_grid) prof.abs_moments[q] = abs_moment(spec, q);
    for (double t : t_grid) prof.exp_moments[t] = exp_abs_moment(spec, t);
    return prof;
}

std::vector<double> sample(const DistributionSpec& spec, std::size_t n,
                           std::uint64_t seed) {
    validate(spec);
    if (n == 0) throw std::domain_error("kmt::sample: n must be >= 1");
    Rng rng(seed);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = quantile(spec, rng.uniform());
    return out;
}

}  // namespace kmt
