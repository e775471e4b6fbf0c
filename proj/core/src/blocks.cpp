#include "kmt/blocks.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "kmt/csv.hpp"

namespace kmt {

double WeightSequence::tail_mass() const {
    if (tail == TailKind::zero || u.empty()) return 0.0;
    return u.back() * ratio / (1.0 - ratio);
}

namespace {

void validate_weights(const WeightSequence& w) {
    if (w.u.empty())
        throw std::domain_error("kmt::WeightSequence: empty weight sequence");
    for (double x : w.u)
        if (!(x >= 0.0) || !std::isfinite(x))
            throw std::domain_error("kmt::WeightSequence: weights must be finite and >= 0");
    if (w.tail == TailKind::geometric && !(w.ratio > 0.0 && w.ratio < 1.0))
        throw std::domain_error("kmt::WeightSequence: geometric tail needs ratio in (0, 1)");
}

}  // namespace

WeightSequence weights_from_csv(const std::string& csv_text,
                                const std::string& sidecar_json) {
    WeightSequence w;
    std::istringstream in(csv_text);
    std::string line;
    std::size_t expect_k = 1;
    bool saw_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {  // optional column header row "k,u_k"
            saw_header = true;
            if (!std::isdigit(static_cast<unsigned char>(line[0]))) continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("kmt::weights_from_csv: malformed row '" + line + "'");
        const std::size_t k = std::stoull(line.substr(0, comma));
        if (k != expect_k)
            throw std::invalid_argument("kmt::weights_from_csv: indices must run 1..H contiguously");
        w.u.push_back(std::stod(line.substr(comma + 1)));
        ++expect_k;
    }
    const auto j = nlohmann::json::parse(sidecar_json);
    const std::string type = j.at("type").get<std::string>();
    if (type == "zero") {
        w.tail = TailKind::zero;
    } else if (type == "geometric") {
        w.tail = TailKind::geometric;
        w.ratio = j.at("ratio").get<double>();
    } else {
        throw std::invalid_argument("kmt::weights_from_csv: unknown tail type '" + type + "'");
    }
    validate_weights(w);
    return w;
}

WeightSequence load_weights(const std::string& csv_path,
                            const std::string& sidecar_path) {
    auto slurp = [](const std::string& path) {
        std::ifstream f(path);
        if (!f) throw std::runtime_error("kmt::load_weights: cannot open '" + path + "'");
        std::ostringstream ss;
        ss << f.rdbuf();
        return ss.str();
    };
    return weights_from_csv(slurp(csv_path), slurp(sidecar_path));
}

std::string weights_to_csv(const WeightSequence& w) {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t k = 1; k <= w.u.size(); ++k)
        rows.push_back({std::to_string(k), format_double(w.u[k - 1])});
    return csv_document({"k", "u_k"}, rows);
}

std::string weights_sidecar_json(const WeightSequence& w) {
    nlohmann::json j;
    j["type"] = w.tail == TailKind::zero ? "zero" : "geometric";
    if (w.tail == TailKind::geometric) j["ratio"] = w.ratio;
    return j.dump();
}

int BlockPartition::b_of(std::size_t m) const {
    if (m < 1 || m > horizon())
        throw std::domain_error("kmt::BlockPartition::b_of: m beyond horizon");
    return b[m];
}

std::size_t BlockPartition::n_m(std::size_t m) const {
    if (m < 1 || m > horizon())
        throw std::domain_error("kmt::BlockPartition::n_m: m beyond horizon");
    return nm[m];
}

std::size_t BlockPartition::n_m_closed_form(std::size_t m) const {
    if (m < 1 || m > horizon())
        throw std::domain_error("kmt::BlockPartition::n_m_closed_form: m beyond horizon");
    // floor(log2(U/T_m)) = b(m) - 1, so the condition log2(U/T_n) >= b(m)-1
    // is exactly T_n <= 2^{-b(m)+1} U, resolved without taking logs.
    const double thresh = std::ldexp(U, -(b[m] - 1));
    const auto first = std::partition_point(T.begin() + 1, T.begin() + 1 + horizon(),
                                            [&](double t) { return t > thresh; });
    return static_cast<std::size_t>(first - T.begin());
}

BlockPartition block_partition(const WeightSequence& u) {
    validate_weights(u);
    BlockPartition p;
    p.weights = u;
    const std::size_t H = u.horizon();
    p.T.assign(H + 2, 0.0);
    p.T[H + 1] = u.tail_mass();
    for (std::size_t n = H; n >= 1; --n) p.T[n] = p.T[n + 1] + u.u[n - 1];
    p.U = p.T[1];
    if (!(p.U > 0.0) || !std::isfinite(p.U))
        throw std::domain_error("kmt::block_partition: total mass must be finite and positive");

    p.b.assign(H + 1, 0);
    p.nm.assign(H + 1, 0);
    int cur_b = 1;
    std::size_t block_start = 1;
    for (std::size_t m = 1; m <= H; ++m) {
        if (!(p.T[m] > 0.0))
            throw std::domain_error(
                "kmt::block_partition: tail mass vanishes within horizon (T_m = 0)");
        // b(m) = min{ b >= 1 : T_m > 2^{-b} U }, exact dyadic comparison.
        int bm = std::max(cur_b, 1);
        while (!(p.T[m] > std::ldexp(p.U, -bm))) {
            ++bm;
            if (bm > 4200)
                throw std::logic_error("kmt::block_partition: bin scan failed to terminate");
        }
        if (m == 1) {
            cur_b = bm;
            block_start = 1;
            p.blocks.push_back({bm, 1, 1});
        } else if (bm != cur_b) {
            cur_b = bm;
            block_start = m;
            p.blocks.push_back({bm, m, m});
        } else {
            p.blocks.back().hi = m;
        }
        p.b[m] = bm;
        p.nm[m] = block_start;
    }
    return p;
}

std::size_t power_nm(const BlockPartition& partition, std::size_t m) {
    if (m < 1 || m > partition.horizon())
        throw std::domain_error("kmt::power_nm: m beyond horizon");
    const std::size_t from_blocks = partition.n_m(m);
    const std::size_t closed = partition.n_m_closed_form(m);
    if (from_blocks != closed)
        throw std::logic_error("kmt::power_nm: block minimum and closed form disagree");
    return from_blocks;
}

SlowerSequence slower_sequence(const std::vector<double>& sup_tail,
                               const std::vector<double>& a, int k_min) {
    if (a.empty() || sup_tail.size() != a.size())
        throw std::invalid_argument(
            "kmt::slower_sequence: sup_tail and a must be equal-length and nonempty");
    if (k_min < 1) throw std::domain_error("kmt::slower_sequence: k_min must be >= 1");
    const std::size_t H = a.size();
    for (std::size_t i = 0; i < H; ++i) {
        if (!(a[i] > 0.0) || (i > 0 && a[i] < a[i - 1]))
            throw std::domain_error("kmt::slower_sequence: a must be positive and nondecreasing");
        if (!(sup_tail[i] >= 0.0) || (i > 0 && sup_tail[i] > sup_tail[i - 1]))
            throw std::domain_error(
                "kmt::slower_sequence: sup_tail must be nonnegative and nonincreasing");
    }

    std::vector<std::size_t> nk;  // 1-based indices
    for (std::size_t j = 1; j <= H; ++j) {
        const int k_next = static_cast<int>(nk.size()) + 1;
        const double budget = 1.0 / std::pow(static_cast<double>(k_next) + 1.0, 3.0);
        const bool doubling_ok = nk.empty() || a[j - 1] >= 2.0 * a[nk.back() - 1];
        if (doubling_ok && sup_tail[j - 1] <= budget) nk.push_back(j);
    }
    if (static_cast<int>(nk.size()) < k_min) {
        throw std::domain_error("kmt::slower_sequence: horizon exhausted at k=" +
                                std::to_string(nk.size() + 1));
    }

    SlowerSequence out;
    out.nk = nk;
    out.covered = nk.back();
    out.v.resize(out.covered);
    out.abar.resize(out.covered);
    std::size_t k = 0;  // current segment: m in (n(k), n(k+1)], 0 means m <= n(1)
    double v_at_nk = 1.0;
    for (std::size_t m = 1; m <= out.covered; ++m) {
        double vm;
        if (m <= nk[0]) {
            vm = 1.0;
        } else {
            if (m > nk[k + 1]) {
                v_at_nk = out.v[nk[k + 1] - 1];
                ++k;
            }
            vm = v_at_nk + (a[m - 1] - a[nk[k] - 1]) / a[nk[k + 1] - 1];
        }
        out.v[m - 1] = vm;
        out.abar[m - 1] = a[m - 1] / vm;
    }
    return out;
}

}  // namespace kmt
