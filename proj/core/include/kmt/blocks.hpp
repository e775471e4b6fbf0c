#pragma once
// Tail-weighted block partitions over a finite weight horizon, and the
// slower-sequence construction. Infinite sums are carried as explicit terms
// plus an analytic tail bound declared alongside the weights.

#include <cstddef>
#include <string>
#include <vector>

namespace kmt {

enum class TailKind { zero, geometric };

// Finite weight sequence u_1..u_H with an analytic bound on the mass beyond
// the horizon: 0 for TailKind::zero, u_H * ratio/(1-ratio) for geometric
// (valid whenever u_{H+j} <= u_H * ratio^j).
struct WeightSequence {
    std::vector<double> u;  // u[k-1] holds u_k
    TailKind tail = TailKind::zero;
    double ratio = 0.0;

    std::size_t horizon() const { return u.size(); }
    double tail_mass() const;  // analytic bound on sum_{k > horizon} u_k
};

// CSV columns (k, u_k) with the shared "#schema=1" preamble; the JSON sidecar
// declares the tail form {"type": "zero"|"geometric", "ratio": r}.
WeightSequence weights_from_csv(const std::string& csv_text,
                                const std::string& sidecar_json);
WeightSequence load_weights(const std::string& csv_path,
                            const std::string& sidecar_path);
std::string weights_to_csv(const WeightSequence& w);
std::string weights_sidecar_json(const WeightSequence& w);

struct Block {
    int b = 0;            // dyadic bin index
    std::size_t lo = 0;   // first member (1-based)
    std::size_t hi = 0;   // last member (1-based)
};

// Partition of {1..horizon} by dyadic tail bins:
// m belongs to bin b(m) iff 2^{-b(m)} U < T_m <= 2^{-b(m)+1} U,
// where T_n = sum_{k>=n} u_k (explicit terms plus tail bound) and U = T_1.
struct BlockPartition {
    WeightSequence weights;
    double U = 0.0;
    std::vector<double> T;        // T[n] for n in [1, horizon+1]; T[0] unused
    std::vector<int> b;           // b[m] for m in [1, horizon]; b[0] unused
    std::vector<std::size_t> nm;  // nm[m] = min of m's block; nm[0] unused
    std::vector<Block> blocks;    // contiguous, ordered, disjoint cover

    std::size_t horizon() const { return weights.horizon(); }
    int b_of(std::size_t m) const;
    std::size_t n_m(std::size_t m) const;  // min N_{b(m)} from the block table
    // min{ n : log2(U/T_n) >= floor(log2(U/T_m)) }, evaluated with exact
    // dyadic comparisons; agrees with n_m by the partition identity.
    std::size_t n_m_closed_form(std::size_t m) const;
};

BlockPartition block_partition(const WeightSequence& u);

// n_m via both the block definition and the closed form; throws
// std::logic_error if they ever disagree.
std::size_t power_nm(const BlockPartition& partition, std::size_t m);

// Greedy slower-sequence construction. Inputs are aligned 1-based sequences
// (index 0 of each vector holds entry 1): a positive nondecreasing, sup_tail
// nonnegative nonincreasing (sup over the sweep of sum_{j>=m} b_j/a_j).
// Picks n(1) as the first index with sup_tail <= 1/8, then n(k+1) as the
// first later index with a >= 2 a_{n(k)} and sup_tail <= 1/(k+2)^3; defines
// v(m) = 1 on [1, n(1)] and v(m) = v(n(k)) + (a_m - a_{n(k)})/a_{n(k+1)} on
// (n(k), n(k+1)]; returns abar_m = a_m / v(m) on the covered prefix
// [1, n(K)]. Throws "horizon exhausted at k" if fewer than k_min stages fit.
struct SlowerSequence {
    std::vector<double> abar;     // abar[m-1] for m in [1, covered]
    std::vector<double> v;        // v[m-1]
    std::vector<std::size_t> nk;  // n(1)..n(K), 1-based indices into a
    std::size_t covered = 0;      // = nk.back()
};

SlowerSequence slower_sequence(const std::vector<double>& sup_tail,
                               const std::vector<double>& a, int k_min = 1);

}  // namespace kmt
