#pragma once
// Doubly exponential epoch scheme: d(n) = 2^(2^n), D(n) = sum_{k=1}^n d(k).
// All arithmetic that would overflow is carried in log2 space; exact values
// are available for the small n where they fit in 64 bits.

#include <cstdint>

namespace kmt {

// log2 of d(n), i.e. 2^n exactly (n in [0, 62]).
double log2_d(int n);

// d(n) = 2^(2^n) exactly; defined for n in [0, 5] (d(5) = 2^32).
std::uint64_t d_exact(int n);

// D(n) = sum_{k=1}^n d(k) exactly; defined for n in [0, 5], D(0) = 0.
std::uint64_t D_exact(int n);

// log2 of D(n); -inf at n = 0, exact table through n = 6's correction term,
// indistinguishable from 2^n at double precision for n >= 7.
double log2_D(int n);

// Largest n with D(n-1) + 1 <= m. Requires m >= 4; the result is at most 6
// for any 64-bit m because D(6) exceeds 2^64.
int epoch_index(std::uint64_t m);

}  // namespace kmt
