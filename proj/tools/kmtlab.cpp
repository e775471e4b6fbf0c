// kmtlab: command-line lab for distribution-uniform coupling theory.
// Subcommands: regularity, bound, couple, verify, family. All outputs are
// deterministic for fixed flags and seed; files are written atomically.
//
// Exit codes: 0 success, 1 verification violation, 2 invalid spec/input,
// 3 infeasible parameters, 4 unsupported strategy.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include "kmt/blocks.hpp"
#include "kmt/bounds.hpp"
#include "kmt/checks.hpp"
#include "kmt/coupling.hpp"
#include "kmt/csv.hpp"
#include "kmt/distribution.hpp"
#include "kmt/epoch.hpp"
#include "kmt/regularity.hpp"
#include "kmt/rng.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInvalidSpec = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitUnsupportedStrategy = 4;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("KMTLAB_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "kmtlab: ignoring malformed KMTLAB_SEED='" << env << "'\n";
        }
    }
    return 1;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("kmtlab: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        if (content.empty() || content.back() != '\n') std::cout << '\n';
    } else {
        kmt::atomic_write_file(out_path, content);
    }
}

kmt::DistributionSpec spec_from_flags(const std::string& inline_json,
                                      const std::string& file) {
    if (inline_json.empty() && file.empty())
        throw std::invalid_argument("kmtlab: provide --spec or --spec-file");
    return kmt::parse_spec_json(file.empty() ? inline_json : slurp(file));
}

// CSV with columns (k, value): the k column must run 1..H contiguously.
std::vector<double> load_series_csv(const std::string& path) {
    std::istringstream in(slurp(path));
    std::string line;
    std::vector<double> out;
    bool saw_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            saw_header = true;
            if (!std::isdigit(static_cast<unsigned char>(line[0]))) continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("kmtlab: malformed series row '" + line + "'");
        if (std::stoull(line.substr(0, comma)) != out.size() + 1)
            throw std::invalid_argument("kmtlab: series indices must run 1..H");
        out.push_back(std::stod(line.substr(comma + 1)));
    }
    if (out.empty()) throw std::invalid_argument("kmtlab: empty series in '" + path + "'");
    return out;
}

// ---------------------------------------------------------------- regularity

int cmd_regularity(const std::string& spec_json, const std::string& spec_file,
                   double tol, int qmax, double ubar_sigma, double t_choice,
                   const std::string& format, const std::string& out) {
    kmt::DistributionSpec spec;
    try {
        spec = spec_from_flags(spec_json, spec_file);
    } catch (const std::exception& e) {
        std::cerr << "kmtlab regularity: invalid spec: " << e.what() << "\n";
        return kExitInvalidSpec;
    }
    const kmt::RegularityReport report = kmt::regularity_report(spec, tol, qmax);
    std::vector<kmt::EdgeCheck> edges;
    if (!report.heavy_tail_flag) {
        const double us = ubar_sigma > 0.0 ? ubar_sigma : kmt::std_dev(spec);
        edges = kmt::relation_check(spec, us, t_choice, std::min(40, qmax));
    }
    emit(out, format == "csv" ? kmt::regularity_csv(spec, report, edges)
                              : kmt::regularity_report_json(spec, report, edges));
    return kExitOk;
}

// --------------------------------------------------------------------- bound

int cmd_bound_exp(double lambda, double sigma, double c,
                  std::vector<double> z_grid, std::vector<std::uint64_t> m_grid,
                  const std::string& out) {
    std::vector<std::vector<std::string>> rows;
    for (std::uint64_t m : m_grid)
        for (double z : z_grid) {
            const kmt::BoundValue bv = kmt::kmt_exponential_bound(lambda, sigma, z, m, c);
            rows.push_back({"exp", kmt::format_double(z), std::to_string(m), "",
                            kmt::format_double(bv.value()),
                            kmt::format_double(bv.log_value),
                            bv.vacuous ? "1" : "0", std::to_string(bv.terms_used),
                            kmt::format_double(bv.truncation_bound)});
        }
    emit(out, kmt::csv_document({"theorem", "z", "m", "epsilon", "value", "log_value",
                                 "vacuous", "terms_used", "truncation_bound"},
                                rows));
    return kExitOk;
}

int cmd_bound_power(const kmt::WeightSequence& u, const std::vector<double>& a,
                    const std::vector<double>& ubar_a,
                    std::vector<std::uint64_t> m_grid, std::vector<double> eps_grid,
                    double Cq, double q, const std::string& out) {
    std::vector<std::vector<std::string>> rows;
    for (std::uint64_t m : m_grid)
        for (double eps : eps_grid) {
            const kmt::BoundValue bv =
                kmt::power_bound(u, a, ubar_a, static_cast<std::size_t>(m), eps, Cq, q);
            rows.push_back({"power", "", std::to_string(m), kmt::format_double(eps),
                            kmt::format_double(bv.value()),
                            kmt::format_double(bv.log_value),
                            bv.vacuous ? "1" : "0", std::to_string(bv.terms_used),
                            kmt::format_double(bv.truncation_bound)});
        }
    emit(out, kmt::csv_document({"theorem", "z", "m", "epsilon", "value", "log_value",
                                 "vacuous", "terms_used", "truncation_bound"},
                                rows));
    return kExitOk;
}

// -------------------------------------------------------------------- couple

int cmd_couple(const std::string& spec_json, const std::string& spec_file,
               const std::string& strategy_name, const std::string& weight_name,
               double weight_q, std::size_t m, std::size_t K, double z, int reps,
               std::uint64_t seed, int workers, const std::string& out,
               const std::string& paths_csv) {
    kmt::DistributionSpec spec;
    try {
        spec = spec_from_flags(spec_json, spec_file);
    } catch (const std::exception& e) {
        std::cerr << "kmtlab couple: invalid spec: " << e.what() << "\n";
        return kExitInvalidSpec;
    }
    kmt::Strategy strategy;
    try {
        strategy = kmt::parse_strategy(strategy_name);
    } catch (const std::exception& e) {
        std::cerr << "kmtlab couple: " << e.what() << "\n";
        return kExitUnsupportedStrategy;
    }
    kmt::SupWeight weight;
    if (weight_name == "log_k") {
        weight.kind = kmt::SupWeight::Kind::log_k;
    } else if (weight_name == "k_power") {
        weight.kind = kmt::SupWeight::Kind::k_power;
        weight.q = weight_q;
    } else {
        std::cerr << "kmtlab couple: unknown weight '" << weight_name << "'\n";
        return kExitInvalidSpec;
    }
    try {
        const kmt::TailEstimate est =
            kmt::tail_estimate(spec, strategy, weight, m, K, z, reps, seed, workers);
        emit(out, kmt::tail_estimate_json(est, spec, strategy, weight, m, K, z, seed));
        if (!paths_csv.empty()) {
            const kmt::CouplingRun run =
                kmt::couple_paths(spec, K, strategy, kmt::mix_seed(seed, 0));
            kmt::atomic_write_file(paths_csv, kmt::coupling_run_csv(run));
        }
    } catch (const std::domain_error& e) {
        const std::string msg = e.what();
        std::cerr << "kmtlab couple: " << msg << "\n";
        return msg.find("supports only") != std::string::npos ? kExitUnsupportedStrategy
                                                              : kExitInfeasible;
    }
    return kExitOk;
}

// -------------------------------------------------------------------- verify

struct VerifyStats {
    long cases = 0;
    long failures = 0;
    void absorb(const kmt::CheckResult& r) {
        ++cases;
        if (!r.holds) {
            ++failures;
            std::cerr << "verify FAILURE: " << kmt::check_result_json(r) << "\n";
        }
    }
};

void verify_lemma_suite(long n_cases, std::uint64_t seed, VerifyStats& stats) {
    kmt::Rng rng(kmt::mix_seed(seed, 100));
    const long per_op = n_cases;

    for (long i = 0; i < per_op; ++i) {  // maximal weighted sum inequality
        const std::size_t K = 2 + static_cast<std::size_t>(rng.bits() % 63);
        std::vector<double> a(K), b(K);
        double acc = 0.1 + std::fabs(kmt::norm_quantile(rng.uniform()));
        for (std::size_t k = 0; k < K; ++k) {
            a[k] = acc;
            acc += std::fabs(kmt::norm_quantile(rng.uniform()));
            b[k] = kmt::norm_quantile(rng.uniform());
        }
        const std::size_t m = rng.bits() % (K - 1);
        stats.absorb(kmt::maximal_weighted_check(a, b, m, K));
    }

    for (long i = 0; i < per_op; ++i) {  // moment split on random discrete laws
        auto random_law = [&]() {
            const std::size_t n = 1 + rng.bits() % 6;
            kmt::DiscreteLaw law;
            double total = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                law.support.push_back(3.0 * kmt::norm_quantile(rng.uniform()));
                law.prob.push_back(rng.uniform());
                total += law.prob[j];
            }
            for (double& p : law.prob) p /= total;
            return law;
        };
        const double p = 2.0 + 1e-6 + 4.0 * rng.uniform();
        stats.absorb(kmt::moment_split_check(random_law(), random_law(), p));
    }

    for (long i = 0; i < per_op; ++i) {  // polynomial moment from exponential
        kmt::DistributionSpec spec;
        double t;
        switch (rng.bits() % 5) {
            case 0: spec = kmt::DistributionSpec::rademacher(); t = 0.1 + 2.0 * rng.uniform(); break;
            case 1: spec = kmt::DistributionSpec::centered_uniform(0.2 + 3.0 * rng.uniform());
                    t = 0.1 + 2.0 * rng.uniform(); break;
            case 2: spec = kmt::DistributionSpec::centered_gaussian(0.2 + 2.0 * rng.uniform());
                    t = 0.1 + 2.0 * rng.uniform(); break;
            case 3: {
                const double beta = 0.2 + rng.uniform();
                spec = kmt::DistributionSpec::centered_laplace(beta);
                t = (0.05 + 0.9 * rng.uniform()) / beta;  // stay below 1/beta
                break;
            }
            default: spec = kmt::DistributionSpec::centered_two_point(
                         0.05 + 0.9 * rng.uniform(), 0.2 + 2.0 * rng.uniform());
                     t = 0.1 + 2.0 * rng.uniform(); break;
        }
        const int q = 2 + static_cast<int>(rng.bits() % 7);
        stats.absorb(kmt::poly_from_exp_check(spec, t, q));
    }

    for (long i = 0; i < per_op; ++i) {  // truncated-weight sum
        const double x = 3.0 * kmt::norm_quantile(rng.uniform());
        const double q = 2.0 + 1e-6 + 6.0 * rng.uniform();
        const std::size_t n = 1 + rng.bits() % 300;
        stats.absorb(kmt::truncation_sum_check(x, q, n));
    }

    if (n_cases > 0)  // exact epoch growth identities
        for (const auto& r : kmt::epoch_bound_identity_checks(2, 14)) stats.absorb(r);
}

void verify_partition_suite(long n_cases, std::uint64_t seed, VerifyStats& stats) {
    namespace mp = boost::multiprecision;
    if (n_cases > 0) {
        // Exhaustive epoch table against an independently computed big-int D.
        std::vector<mp::cpp_int> D(7, 0);
        for (int n = 1; n <= 6; ++n) D[n] = D[n - 1] + (mp::cpp_int(1) << (1ULL << n));
        long mismatches = 0;
        for (std::uint64_t m = 4; m <= 1000000; ++m) {
            int expect = 1;
            while (expect < 6 && D[expect] + 1 <= m) ++expect;
            if (kmt::epoch_index(m) != expect) ++mismatches;
        }
        kmt::CheckResult r = kmt::make_check(static_cast<double>(mismatches), 0.0,
                                             "{\"op\":\"epoch_table_exhaustive\"}");
        stats.absorb(r);
    }

    kmt::Rng rng(kmt::mix_seed(seed, 200));
    const long sequences = std::min<long>(n_cases, 100);
    for (long s = 0; s < sequences; ++s) {
        kmt::WeightSequence w;
        const std::size_t H = 1 + rng.bits() % 10000;
        w.u.resize(H);
        for (std::size_t k = 0; k < H; ++k)
            w.u[k] = std::exp(2.0 * kmt::norm_quantile(rng.uniform()));
        if (rng.bits() % 2 == 0) {
            w.tail = kmt::TailKind::geometric;
            w.ratio = 0.05 + 0.9 * rng.uniform();
        }
        const kmt::BlockPartition part = kmt::block_partition(w);
        long bad = 0;
        for (std::size_t m = 1; m <= H; ++m) {
            const int b = part.b_of(m);
            const bool dyadic_ok = part.T[m] > std::ldexp(part.U, -b) &&
                                   !(part.T[m] > std::ldexp(part.U, -b + 1));
            bool agree = true;
            try {
                (void)kmt::power_nm(part, m);
            } catch (const std::logic_error&) {
                agree = false;
            }
            if (!dyadic_ok || !agree) ++bad;
        }
        std::size_t covered = 0;
        for (const auto& blk : part.blocks) covered += blk.hi - blk.lo + 1;
        if (covered != H) ++bad;
        stats.absorb(kmt::make_check(static_cast<double>(bad), 0.0,
                                     "{\"op\":\"block_partition_random\"}"));
    }

    if (n_cases > 0) {  // geometric fixture: N_b = {b}, n_m = m
        kmt::WeightSequence w;
        w.tail = kmt::TailKind::geometric;
        w.ratio = 0.5;
        for (int k = 1; k <= 64; ++k) w.u.push_back(std::ldexp(1.0, -k));
        const kmt::BlockPartition part = kmt::block_partition(w);
        long bad = 0;
        for (std::size_t m = 1; m <= 64; ++m)
            if (part.b_of(m) != static_cast<int>(m) || kmt::power_nm(part, m) != m) ++bad;
        stats.absorb(kmt::make_check(static_cast<double>(bad), 0.0,
                                     "{\"op\":\"block_partition_geometric_fixture\"}"));
    }
}

int cmd_verify(const std::string& suite, long n_cases, std::uint64_t seed,
               const std::string& batch_file) {
    if (!batch_file.empty()) {
        bool all_hold = false;
        const std::string results = kmt::run_check_batch(slurp(batch_file), &all_hold);
        std::cout << results << "\n";
        return all_hold ? kExitOk : kExitViolation;
    }
    VerifyStats stats;
    if (suite == "lemmas" || suite == "all") verify_lemma_suite(n_cases, seed, stats);
    if (suite == "partitions" || suite == "all")
        verify_partition_suite(n_cases, seed, stats);
    if (suite != "lemmas" && suite != "partitions" && suite != "all") {
        std::cerr << "kmtlab verify: unknown suite '" << suite << "'\n";
        return kExitInvalidSpec;
    }
    std::cout << "verify: suite=" << suite << " cases=" << stats.cases
              << " failures=" << stats.failures << "\n";
    return stats.failures == 0 ? kExitOk : kExitViolation;
}

// -------------------------------------------------------------------- family

int cmd_family(const std::string& specs_json, const std::string& specs_file,
               double q, std::vector<double> m_grid, double threshold,
               const std::string& format, const std::string& out) {
    kmt::FamilySweep sweep;
    try {
        const std::string text = specs_file.empty() ? specs_json : slurp(specs_file);
        const auto arr = nlohmann::json::parse(text);
        if (!arr.is_array() || arr.empty())
            throw std::invalid_argument("expected a nonempty JSON array of specs");
        for (const auto& j : arr) sweep.specs.push_back(kmt::parse_spec_json(j.dump()));
    } catch (const std::exception& e) {
        std::cerr << "kmtlab family: invalid specs: " << e.what() << "\n";
        return kExitInvalidSpec;
    }
    sweep.m_grid = std::move(m_grid);
    const kmt::TailProfile prof = kmt::uniform_tail_profile(sweep, q, threshold);
    emit(out, format == "csv" ? kmt::tail_profile_csv(prof)
                              : kmt::tail_profile_json(prof));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kmtlab: regularity parameters, coupling bounds, and seeded "
                 "coupling experiments for distribution-uniform theory"};
    app.require_subcommand(1);

    // regularity ------------------------------------------------------------
    auto* reg = app.add_subcommand("regularity", "Regularity report for a spec");
    std::string reg_spec, reg_spec_file, reg_format = "json", reg_out;
    double reg_tol = 1e-10, reg_ubar = -1.0, reg_t = -1.0;
    int reg_qmax = 200;
    reg->add_option("--spec", reg_spec, "distribution spec JSON");
    reg->add_option("--spec-file", reg_spec_file, "path to spec JSON");
    reg->add_option("--tol", reg_tol, "bisection relative tolerance");
    reg->add_option("--qmax", reg_qmax, "Bernstein scan truncation");
    reg->add_option("--ubar-sigma", reg_ubar, "uniform sigma lower bound (default: sigma)");
    reg->add_option("--t-choice", reg_t, "tilt for the exponential-pair edge (default lambda/2)");
    reg->add_option("--format", reg_format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    reg->add_option("--out", reg_out, "output path (default stdout)");

    // bound -----------------------------------------------------------------
    auto* bnd = app.add_subcommand("bound", "Evaluate concentration bound series");
    std::string bnd_theorem, bnd_out, bnd_weights, bnd_sidecar, bnd_a, bnd_ubar, bnd_fixture;
    double bnd_lambda = 0.5, bnd_sigma = 1.0, bnd_c = 1.0, bnd_Cq = 1.0, bnd_q = 3.0;
    std::vector<double> bnd_z{1.0}, bnd_eps{1.0};
    std::vector<std::uint64_t> bnd_m{4};
    std::size_t bnd_horizon = 64;
    bnd->add_option("--theorem", bnd_theorem, "exp|power")
        ->required()
        ->check(CLI::IsMember({"exp", "power"}));
    bnd->add_option("--lambda", bnd_lambda, "tilt parameter (exp)");
    bnd->add_option("--sigma", bnd_sigma, "standard deviation (exp)");
    auto* copt = bnd->add_option("--c", bnd_c, "universal constant c (exp)");
    bnd->add_option("--z-grid", bnd_z, "z values (exp)")->delimiter(',');
    bnd->add_option("--m-grid", bnd_m, "m values")->delimiter(',');
    bnd->add_option("--weights", bnd_weights, "weight CSV path (power)");
    bnd->add_option("--sidecar", bnd_sidecar, "tail sidecar JSON path (power)");
    bnd->add_option("--a", bnd_a, "normalizing sequence CSV (power)");
    bnd->add_option("--ubar-a", bnd_ubar, "slower sequence CSV (power)");
    bnd->add_option("--fixture", bnd_fixture, "built-in fixture name: geometric (power)");
    bnd->add_option("--horizon", bnd_horizon, "fixture horizon (power)");
    bnd->add_option("--eps-grid", bnd_eps, "epsilon values (power)")->delimiter(',');
    auto* cqopt = bnd->add_option("--Cq", bnd_Cq, "universal constant C(q) (power)");
    bnd->add_option("--q", bnd_q, "moment order q (power)");
    bnd->add_option("--out", bnd_out, "output path (default stdout)");

    // couple ----------------------------------------------------------------
    auto* cpl = app.add_subcommand("couple", "Seeded coupling tail estimate");
    std::string cpl_spec, cpl_spec_file, cpl_strategy = "per_variable_quantile";
    std::string cpl_weight = "log_k", cpl_out, cpl_paths;
    double cpl_q = 3.0, cpl_z = 1.0;
    std::size_t cpl_m = 4, cpl_K = 1024;
    int cpl_reps = 1000, cpl_workers = 1;
    std::uint64_t cpl_seed = default_seed();
    cpl->add_option("--spec", cpl_spec, "distribution spec JSON");
    cpl->add_option("--spec-file", cpl_spec_file, "path to spec JSON");
    cpl->add_option("--strategy", cpl_strategy,
                    "independent|per_variable_quantile|blockwise_sum_quantile");
    cpl->add_option("--weight", cpl_weight, "log_k|k_power");
    cpl->add_option("--q", cpl_q, "weight exponent for k_power");
    cpl->add_option("--m", cpl_m, "supremum start index");
    cpl->add_option("--K", cpl_K, "path length");
    cpl->add_option("--z", cpl_z, "threshold");
    cpl->add_option("--reps", cpl_reps, "replications (>= 100)");
    cpl->add_option("--seed", cpl_seed, "master seed (default: KMTLAB_SEED or 1)");
    cpl->add_option("--workers", cpl_workers, "worker threads");
    cpl->add_option("--out", cpl_out, "output path (default stdout)");
    cpl->add_option("--paths-csv", cpl_paths, "also write replication 0's paths as CSV");

    // verify ----------------------------------------------------------------
    auto* ver = app.add_subcommand("verify", "Run inequality oracle batteries");
    std::string ver_suite = "all", ver_batch;
    long ver_cases = 10000;
    std::uint64_t ver_seed = default_seed();
    ver->add_option("--suite", ver_suite, "lemmas|partitions|all");
    ver->add_option("--cases", ver_cases, "randomized cases per operation");
    ver->add_option("--seed", ver_seed, "master seed (default: KMTLAB_SEED or 1)");
    ver->add_option("--batch", ver_batch, "JSON file of check requests (overrides suite)");

    // family ----------------------------------------------------------------
    auto* fam = app.add_subcommand("family", "Uniform tail profile over a sweep");
    std::string fam_specs, fam_specs_file, fam_format = "json", fam_out;
    double fam_q = 3.0, fam_threshold = 1e-3;
    std::vector<double> fam_m{0.5, 1.0, 2.0};
    fam->add_option("--specs", fam_specs, "JSON array of distribution specs");
    fam->add_option("--specs-file", fam_specs_file, "path to spec array JSON");
    fam->add_option("--q", fam_q, "moment order");
    fam->add_option("--m-grid", fam_m, "truncation grid")->delimiter(',');
    fam->add_option("--threshold", fam_threshold, "uniform-integrability threshold");
    fam->add_option("--format", fam_format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    fam->add_option("--out", fam_out, "output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (reg->parsed())
            return cmd_regularity(reg_spec, reg_spec_file, reg_tol, reg_qmax, reg_ubar,
                                  reg_t, reg_format, reg_out);
        if (bnd->parsed()) {
            if (bnd_theorem == "exp") {
                if (copt->count() == 0)
                    std::cerr << "kmtlab bound: universal constant c left at "
                                 "non-rigorous default 1.0\n";
                return cmd_bound_exp(bnd_lambda, bnd_sigma, bnd_c, bnd_z, bnd_m, bnd_out);
            }
            if (cqopt->count() == 0)
                std::cerr << "kmtlab bound: universal constant C(q) left at "
                             "non-rigorous default 1.0\n";
            kmt::WeightSequence u;
            std::vector<double> a, ubar;
            if (bnd_fixture == "geometric") {
                u.tail = kmt::TailKind::geometric;
                u.ratio = 0.5;
                for (std::size_t k = 1; k <= bnd_horizon; ++k) {
                    u.u.push_back(std::ldexp(1.0, -static_cast<int>(k)));
                    a.push_back(static_cast<double>(k));
                    ubar.push_back(std::sqrt(static_cast<double>(k)));
                }
            } else if (!bnd_fixture.empty()) {
                std::cerr << "kmtlab bound: unknown fixture '" << bnd_fixture << "'\n";
                return kExitInvalidSpec;
            } else {
                if (bnd_weights.empty() || bnd_sidecar.empty() || bnd_a.empty() ||
                    bnd_ubar.empty()) {
                    std::cerr << "kmtlab bound: power theorem needs --weights, "
                                 "--sidecar, --a, --ubar-a (or --fixture geometric)\n";
                    return kExitInvalidSpec;
                }
                u = kmt::load_weights(bnd_weights, bnd_sidecar);
                a = load_series_csv(bnd_a);
                ubar = load_series_csv(bnd_ubar);
            }
            return cmd_bound_power(u, a, ubar, bnd_m, bnd_eps, bnd_Cq, bnd_q, bnd_out);
        }
        if (cpl->parsed())
            return cmd_couple(cpl_spec, cpl_spec_file, cpl_strategy, cpl_weight, cpl_q,
                              cpl_m, cpl_K, cpl_z, cpl_reps, cpl_seed, cpl_workers,
                              cpl_out, cpl_paths);
        if (ver->parsed()) return cmd_verify(ver_suite, ver_cases, ver_seed, ver_batch);
        if (fam->parsed())
            return cmd_family(fam_specs, fam_specs_file, fam_q, fam_m, fam_threshold,
                              fam_format, fam_out);
    } catch (const std::domain_error& e) {
        std::cerr << "kmtlab: infeasible parameters: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "kmtlab: " << e.what() << "\n";
        return kExitInvalidSpec;
    }
    return kExitOk;
}
