#include "kmt/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "kmt/epoch.hpp"

namespace kmt {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2 = 0.6931471805599453094;

// log(1 + e^w) without overflow.
double softplus(double w) { return w > 36.0 ? w : std::log1p(std::exp(w)); }

nlohmann::json json_real(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    return x;
}
}  // namespace

double BoundValue::value() const { return std::exp(log_value); }

std::string bound_value_json(const BoundValue& bv) {
    nlohmann::json j;
    j["log_value"] = json_real(bv.log_value);
    j["value"] = json_real(bv.value());
    j["vacuous"] = bv.vacuous;
    j["terms_used"] = bv.terms_used;
    j["truncation_bound"] = json_real(bv.truncation_bound);
    return j.dump();
}

BoundValue kmt_exponential_bound(double lambda, double sigma, double z,
                                 std::uint64_t m, double c) {
    if (!(lambda > 0.0) || !(sigma > 0.0) || !(z > 0.0) || !(c > 0.0))
        throw std::domain_error("kmt::kmt_exponential_bound: parameters must be positive");
    const int n0 = epoch_index(m);  // enforces m >= 4

    BoundValue bv;
    const double clz = c * lambda * z;
    if (clz <= 0.5) {
        // Term exponent l_n ~ 2^n ln2 (1/2 - c lambda z): nonvanishing terms.
        bv.log_value = kInf;
        bv.vacuous = true;
        bv.truncation_bound = kInf;
        return bv;
    }

    // l_n = log1p(lambda sigma 2^{2^{n-1}}) - c lambda z 2^n ln2.
    const double log_ls = std::log(lambda * sigma);
    auto term_log = [&](int n) {
        const double w = log_ls + std::ldexp(1.0, n - 1) * kLn2;
        return softplus(w) - clz * std::ldexp(1.0, n) * kLn2;
    };
    // Successive log-term gaps are bounded by gamma * 2^n with
    // gamma = ln2 (1/2 - c lambda z) < 0, so l_j <= l_{N+1} + (j-N-1) gamma
    // 2^{N+1}: the tail after N is geometric with ratio exp(gamma 2^{N+1}).
    const double gamma = kLn2 * (0.5 - clz);

    double lse = -kInf;  // log of the running partial sum
    int n = n0;
    double log_tail;
    for (;;) {
        const double ln = term_log(n);
        lse = std::max(lse, ln) + std::log1p(std::exp(-std::fabs(lse - ln)));
        bv.term_logs.push_back(ln);
        const double ratio = std::exp(gamma * std::ldexp(1.0, n + 1));
        log_tail = term_log(n + 1) - std::log1p(-ratio);
        if (log_tail < lse + std::log(1e-16)) break;
        ++n;
        if (n > n0 + 80)
            throw std::logic_error("kmt::kmt_exponential_bound: series failed to localize");
    }
    bv.terms_used = static_cast<int>(bv.term_logs.size());
    bv.log_value = kLn2 + lse;
    bv.truncation_bound = 2.0 * std::exp(log_tail);
    bv.vacuous = bv.log_value >= 0.0;
    return bv;
}

double sakhanenko_exp_mgf_bound(double lambda, std::uint64_t n, double sigma) {
    if (!(lambda > 0.0) || n < 1 || !(sigma > 0.0))
        throw std::domain_error("kmt::sakhanenko_exp_mgf_bound: parameters must be positive");
    return 1.0 + lambda * std::sqrt(static_cast<double>(n)) * sigma;
}

double sakhanenko_exp_tail_bound(double lambda, std::uint64_t n, double sigma,
                                 double z, double c) {
    if (!(z > 0.0) || !(c > 0.0))
        throw std::domain_error("kmt::sakhanenko_exp_tail_bound: parameters must be positive");
    return sakhanenko_exp_mgf_bound(lambda, n, sigma) * std::exp(-c * lambda * z);
}

double sakhanenko_poly_bound(double q, const std::vector<double>& moments,
                             double Cs) {
    if (!(q > 2.0)) throw std::domain_error("kmt::sakhanenko_poly_bound: q must be > 2");
    if (!(Cs > 0.0)) throw std::domain_error("kmt::sakhanenko_poly_bound: Cs must be positive");
    double s = 0.0;
    for (double mo : moments) {
        if (!std::isfinite(mo) || mo < 0.0)
            throw std::domain_error("kmt::sakhanenko_poly_bound: moments must be finite and >= 0");
        s += mo;
    }
    return Cs * s;
}

BoundValue power_bound(const WeightSequence& u, const std::vector<double>& a,
                       const std::vector<double>& ubar_a, std::size_t m,
                       double epsilon, double Cq, double q) {
    if (!(epsilon > 0.0) || !(Cq > 0.0) || !(q > 2.0))
        throw std::domain_error("kmt::power_bound: need epsilon > 0, Cq > 0, q > 2");
    const std::size_t H = u.horizon();
    if (a.size() < H || ubar_a.size() < H)
        throw std::invalid_argument("kmt::power_bound: a and ubar_a must cover the weight horizon");
    for (std::size_t k = 0; k < H; ++k) {
        if (!(a[k] > 0.0) || !(ubar_a[k] > 0.0) || ubar_a[k] > a[k])
            throw std::domain_error("kmt::power_bound: need 0 < ubar_a <= a elementwise");
        if (k > 0) {
            if (a[k] < a[k - 1] || ubar_a[k] < ubar_a[k - 1])
                throw std::domain_error("kmt::power_bound: a and ubar_a must be nondecreasing");
            if (ubar_a[k] * a[k - 1] > ubar_a[k - 1] * a[k] * (1.0 + 1e-12))
                throw std::domain_error("kmt::power_bound: ubar_a/a must be nonincreasing");
        }
    }
    const BlockPartition part = block_partition(u);
    const std::size_t nm = power_nm(part, m);
    const double ratio = ubar_a[nm - 1] / a[nm - 1];
    const double rq = std::pow(ratio, q);
    const double scale = Cq * std::pow(epsilon, -q);

    BoundValue bv;
    const double val = scale * (part.T[m] + rq * part.U);
    bv.log_value = std::log(val);
    bv.terms_used = static_cast<int>(H - m + 1);
    bv.truncation_bound = scale * u.tail_mass() * (1.0 + rq);
    bv.vacuous = !(val < 1.0);
    bv.term_logs.reserve(H - m + 1);
    for (std::size_t k = m; k <= H; ++k)
        bv.term_logs.push_back(std::log(scale * u.u[k - 1]));
    return bv;
}

double k_power_tail_constant(double q) {
    if (!(q > 2.0)) throw std::domain_error("kmt::k_power_tail_constant: q must be > 2");
    return q / (q - 2.0);
}

BoundComparison variance_diff_bound(const DistributionSpec& spec, double q,
                                    std::uint64_t m, double Cq,
                                    std::uint64_t horizon) {
    if (!(q > 2.0)) throw std::domain_error("kmt::variance_diff_bound: q must be > 2");
    if (m < 1) throw std::domain_error("kmt::variance_diff_bound: m must be >= 1");
    if (horizon < m) throw std::domain_error("kmt::variance_diff_bound: horizon must be >= m");
    if (!(Cq > 0.0)) throw std::domain_error("kmt::variance_diff_bound: Cq must be positive");
    if (std::isinf(abs_moment(spec, q)))
        throw std::domain_error("kmt::variance_diff_bound: divergent q-th moment");

    const double sigma = std_dev(spec);
    double lhs = 0.0;
    for (std::uint64_t k = m; k <= horizon; ++k) {
        const double kd = static_cast<double>(k);
        const double st = std::sqrt(truncated_variance(spec, std::pow(kd, 1.0 / q)));
        const double d = sigma - st;
        lhs += d * d / std::pow(kd, 2.0 / q);
    }
    // The per-term bound (sigma - sigma_tilde_k)^2 <= 4 E|X|^q 1{|X|^q > k}
    // applied from horizon+1 onward majorizes the omitted tail.
    lhs += 4.0 * Cq * tail_moment(spec, q, static_cast<double>(horizon) + 1.0);
    const double rhs = 4.0 * Cq * tail_moment(spec, q, static_cast<double>(m));
    return {lhs, rhs};
}

}  // namespace kmt
