#include "kmt/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "kmt/csv.hpp"

namespace kmt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2 = 0.6931471805599453094;

// h(l) = l * tilted_third(l) - Var; +inf when the tilt diverges/overflows.
double sak_h(const DistributionSpec& spec, double l, double var) {
    const double t = tilted_third(spec, l);
    if (std::isinf(t)) return kInf;
    return l * t - var;
}

// log of the q-th Bernstein term, log[(2 E|X|^q/(q! Var))^{1/(q-2)}].
double bernstein_log_term(const DistributionSpec& spec, int q, double log_var) {
    const double lm = log_abs_moment(spec, static_cast<double>(q));
    if (std::isinf(lm)) return kInf;
    return (kLn2 + lm - std::lgamma(q + 1.0) - log_var) / (q - 2.0);
}

}  // namespace

double sakhanenko_parameter(const DistributionSpec& spec, double rel_tol,
                            BracketCertificate* cert) {
    if (!(rel_tol > 0.0))
        throw std::domain_error("kmt::sakhanenko_parameter: rel_tol must be > 0");
    const double var = variance(spec);
    if (heavy_tail(spec)) {
        if (cert) *cert = {0.0, 0.0, -var, kInf};
        return 0.0;
    }
    // Bracket the root of the increasing h: double hi until h(hi) > 0. The
    // tilt blows up at finite lambda for Laplace and overflows for bounded
    // families long before lambda reaches 710/ess_sup, so this terminates.
    double lo = 0.0, h_lo = -var;
    double hi = 1.0, h_hi = sak_h(spec, hi, var);
    while (h_hi <= 0.0) {
        lo = hi;
        h_lo = h_hi;
        hi *= 2.0;
        h_hi = sak_h(spec, hi, var);
        if (hi > 1e12)
            throw std::runtime_error("kmt::sakhanenko_parameter: failed to bracket");
    }
    for (int it = 0; it < 200 && (hi - lo) > rel_tol * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double h_mid = sak_h(spec, mid, var);
        if (h_mid <= 0.0) {
            lo = mid;
            h_lo = h_mid;
        } else {
            hi = mid;
            h_hi = h_mid;
        }
    }
    if (cert) *cert = {lo, hi, h_lo, h_hi};
    return lo;
}

BernsteinScan bernstein_scan(const DistributionSpec& spec, int q_max) {
    if (q_max < 3) throw std::domain_error("kmt::bernstein_scan: q_max must be >= 3");
    BernsteinScan scan;
    scan.q_max = q_max;
    const double log_var = std::log(variance(spec));
    double best = -kInf, prev = -kInf, last = -kInf;
    for (int q = 3; q <= q_max; ++q) {
        const double lt = bernstein_log_term(spec, q, log_var);
        if (std::isinf(lt) && lt > 0) {
            scan.value = kInf;
            scan.offending_q = q;
            scan.argmax_q = q;
            scan.margin = kInf;
            return scan;
        }
        if (lt > best) {
            best = lt;
            scan.argmax_q = q;
        }
        prev = last;
        last = lt;
    }
    scan.value = std::exp(best);
    scan.margin = q_max >= 4 ? std::exp(last - prev) : 1.0;
    return scan;
}

double bernstein_parameter(const DistributionSpec& spec, int q_max) {
    return bernstein_scan(spec, q_max).value;
}

RegularityReport regularity_report(const DistributionSpec& spec, double rel_tol,
                                   int q_max) {
    RegularityReport rep;
    rep.q_max_used = q_max;
    rep.heavy_tail_flag = heavy_tail(spec);
    rep.lambda_sak = sakhanenko_parameter(spec, rel_tol, &rep.lambda_bracket);
    rep.sak_residual = rep.heavy_tail_flag
                           ? variance(spec)
                           : variance(spec) - rep.lambda_sak * tilted_third(spec, rep.lambda_sak);
    rep.bernstein = bernstein_scan(spec, q_max);
    if (rep.lambda_sak > 0.0) {
        rep.exp_pair_t = rep.lambda_sak;
        rep.exp_pair_C = std::pow(rep.lambda_sak, -3.0) + std::exp(rep.lambda_sak);
    }
    return rep;
}

namespace {

// Worst (smallest) normalized slack of E|X|^q <= (q!/2) b^{q-2} Var over
// integer q in [3, q_check], computed in log space.
EdgeCheck bernstein_condition_check(const DistributionSpec& spec, double b,
                                    int q_check, const std::string& edge) {
    EdgeCheck chk;
    chk.edge = edge;
    const double log_var = std::log(variance(spec));
    const double log_b = std::log(b);
    double worst = kInf;
    for (int q = 3; q <= q_check; ++q) {
        const double log_lhs = log_abs_moment(spec, static_cast<double>(q));
        if (std::isinf(log_lhs)) {
            chk.lhs = kInf;
            chk.rhs = kInf;
            chk.slack = -kInf;
            chk.q_or_m = q;
            chk.pass = false;
            chk.note = "divergent moment";
            return chk;
        }
        const double log_rhs = std::lgamma(q + 1.0) - kLn2 + (q - 2.0) * log_b + log_var;
        double slack;
        if (log_rhs < 700.0) {
            const double lhs = std::exp(log_lhs), rhs = std::exp(log_rhs);
            slack = (rhs - lhs) / std::max(1.0, std::fabs(rhs));
        } else {
            slack = 1.0 - std::exp(log_lhs - log_rhs);
        }
        if (slack < worst) {
            worst = slack;
            chk.q_or_m = q;
            chk.lhs = std::exp(log_lhs);
            chk.rhs = std::exp(log_rhs);
        }
    }
    chk.slack = worst;
    chk.pass = worst >= -1e-9;
    return chk;
}

}  // namespace

std::vector<EdgeCheck> relation_check(const DistributionSpec& spec,
                                      double ubar_sigma, double t_choice,
                                      int q_check) {
    const double var = variance(spec);
    if (!(ubar_sigma > 0.0) || ubar_sigma * ubar_sigma > var)
        throw std::domain_error(
            "kmt::relation_check: infeasible ubar_sigma (need 0 < ubar_sigma^2 <= Var)");
    if (heavy_tail(spec))
        throw std::domain_error(
            "kmt::relation_check: spec has no finite exponential moment");
    const double lambda = sakhanenko_parameter(spec);
    const double t_star = t_choice > 0.0 ? t_choice : 0.5 * lambda;
    std::vector<EdgeCheck> out;

    // (b): exponential pair (t*, C*) induces a Bernstein constant.
    {
        const double C_star = exp_abs_moment(spec, t_star);
        const double cap = std::min(t_star * ubar_sigma, 1.0);
        const double b_from_exp = 2.0 * C_star * ubar_sigma / (cap * cap * cap);
        EdgeCheck chk = bernstein_condition_check(spec, b_from_exp, q_check, "b");
        chk.note = "t=" + format_double(t_star) + " C=" + format_double(C_star) +
                   " b=" + format_double(b_from_exp);
        out.push_back(chk);
    }
    // (c): the measured Bernstein constant makes 1/(7b) a feasible tilt.
    {
        EdgeCheck chk;
        chk.edge = "c";
        const double b = bernstein_parameter(spec);
        const double lam_c = 1.0 / (7.0 * b);
        chk.lhs = lam_c * tilted_third(spec, lam_c);
        chk.rhs = var;
        chk.slack = (chk.rhs - chk.lhs) / std::max(1.0, std::fabs(chk.rhs));
        chk.pass = chk.slack >= -1e-9;
        chk.note = "lambda=" + format_double(lam_c) + " from b=" + format_double(b);
        out.push_back(chk);
    }
    // (d): the measured tilt induces the Bernstein constant 1/lambda.
    {
        EdgeCheck chk = bernstein_condition_check(spec, 1.0 / lambda, q_check, "d");
        chk.note = "b=" + format_double(1.0 / lambda) + " from lambda=" + format_double(lambda);
        out.push_back(chk);
    }
    // (e): (t, C) = (lambda, lambda^-3 + e^lambda) dominates the exp moment.
    {
        EdgeCheck chk;
        chk.edge = "e";
        chk.lhs = exp_abs_moment(spec, lambda);
        chk.rhs = std::pow(lambda, -3.0) + std::exp(lambda);
        chk.slack = (chk.rhs - chk.lhs) / std::max(1.0, std::fabs(chk.rhs));
        chk.pass = chk.slack >= -1e-9;
        chk.note = "t=" + format_double(lambda);
        out.push_back(chk);
    }
    return out;
}

double sub_gaussian_lambda(double sigma, double ubar_sigma) {
    if (!(sigma > 0.0) || !(ubar_sigma > 0.0))
        throw std::domain_error("kmt::sub_gaussian_lambda: parameters must be positive");
    const double arg = ubar_sigma * ubar_sigma /
                       (8.0 * std::sqrt(3.0) * sigma * sigma * sigma);
    if (!(arg > 1.0))
        throw std::domain_error(
            "kmt::sub_gaussian_lambda: vacuous constant (need ubar_sigma^2 > 8*sqrt(3)*sigma^3)");
    return std::sqrt(std::log(arg)) / sigma;
}

double sub_gaussian_moment_bound(double q, double sigma) {
    if (!(q > 0.0) || !(sigma > 0.0))
        throw std::domain_error("kmt::sub_gaussian_moment_bound: parameters must be positive");
    return q * std::pow(2.0, 0.5 * q) * std::pow(sigma, q) * std::tgamma(0.5 * q);
}

TailProfile uniform_tail_profile(const FamilySweep& sweep, double q,
                                 double threshold) {
    if (sweep.specs.empty())
        throw std::invalid_argument("kmt::uniform_tail_profile: empty sweep");
    TailProfile prof;
    prof.q = q;
    prof.threshold = threshold;
    for (double m : sweep.m_grid) {
        double sup = 0.0;
        for (const auto& spec : sweep.specs)
            sup = std::max(sup, tail_moment(spec, q, m));
        prof.points.push_back({m, sup});
        if (sup < threshold) prof.falls_below_threshold = true;
    }
    return prof;
}

std::string regularity_report_json(const DistributionSpec& spec,
                                   const RegularityReport& report,
                                   const std::vector<EdgeCheck>& edges) {
    nlohmann::json j;
    j["spec"] = nlohmann::json::parse(spec_to_json(spec));
    j["lambda_sak"] = report.lambda_sak;
    j["heavy_tail"] = report.heavy_tail_flag;
    j["lambda_bracket"] = {{"lo", report.lambda_bracket.lo},
                           {"hi", report.lambda_bracket.hi}};
    j["sak_residual"] = report.sak_residual;
    j["bernstein"] = std::isinf(report.bernstein.value)
                         ? nlohmann::json("inf")
                         : nlohmann::json(report.bernstein.value);
    j["bernstein_argmax_q"] = report.bernstein.argmax_q;
    j["bernstein_offending_q"] = report.bernstein.offending_q;
    j["bernstein_margin"] = std::isinf(report.bernstein.margin)
                                ? nlohmann::json("inf")
                                : nlohmann::json(report.bernstein.margin);
    j["q_max_used"] = report.q_max_used;
    if (report.exp_pair_t > 0.0)
        j["exp_pair"] = {{"t", report.exp_pair_t}, {"C", report.exp_pair_C}};
    auto arr = nlohmann::json::array();
    for (const auto& e : edges)
        arr.push_back({{"edge", e.edge},
                       {"lhs", e.lhs},
                       {"rhs", e.rhs},
                       {"slack", e.slack},
                       {"q_or_m", e.q_or_m},
                       {"pass", e.pass},
                       {"note", e.note}});
    j["relation_edges"] = arr;
    return j.dump(2);
}

std::string tail_profile_json(const TailProfile& profile) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : profile.points)
        pts.push_back({{"m", p.m},
                       {"sup_tail", std::isinf(p.sup_tail)
                                        ? nlohmann::json("inf")
                                        : nlohmann::json(p.sup_tail)}});
    nlohmann::json j{{"q", profile.q},
                     {"threshold", profile.threshold},
                     {"falls_below_threshold", profile.falls_below_threshold},
                     {"points", pts}};
    return j.dump(2);
}

static const std::vector<std::string> kCsvCols = {"quantity", "value", "slack",
                                                  "q_or_m", "status"};

std::string regularity_csv(const DistributionSpec& spec,
                           const RegularityReport& report,
                           const std::vector<EdgeCheck>& edges) {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"lambda_sak", format_double(report.lambda_sak),
                    format_double(report.sak_residual), "0",
                    report.heavy_tail_flag ? "heavy_tail" : "ok"});
    rows.push_back({"bernstein", format_double(report.bernstein.value),
                    format_double(report.bernstein.margin),
                    std::to_string(report.bernstein.argmax_q),
                    std::isinf(report.bernstein.value) ? "divergent" : "ok"});
    if (report.exp_pair_t > 0.0) {
        rows.push_back({"exp_pair_t", format_double(report.exp_pair_t), "0", "0", "ok"});
        rows.push_back({"exp_pair_C", format_double(report.exp_pair_C), "0", "0", "ok"});
    }
    for (const auto& e : edges)
        rows.push_back({"edge_" + e.edge, format_double(e.lhs),
                        format_double(e.slack), format_double(e.q_or_m),
                        e.pass ? "pass" : "fail"});
    (void)spec;
    return csv_document(kCsvCols, rows);
}

std::string tail_profile_csv(const TailProfile& profile) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& p : profile.points)
        rows.push_back({"sup_tail", format_double(p.sup_tail), "0",
                        format_double(p.m),
                        p.sup_tail < profile.threshold ? "below_threshold" : "above_threshold"});
    return csv_document(kCsvCols, rows);
}

}  // namespace kmt
