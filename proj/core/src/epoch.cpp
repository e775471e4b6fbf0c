#include "kmt/epoch.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace kmt {

namespace {
// D(0..5); D(6) = D(5) + 2^64 no longer fits in 64 bits.
constexpr std::uint64_t kD[6] = {0ULL, 4ULL, 20ULL, 276ULL, 65812ULL, 4295033108ULL};
}  // namespace

double log2_d(int n) {
    if (n < 0 || n > 62) throw std::domain_error("kmt::log2_d: n must be in [0, 62]");
    return std::ldexp(1.0, n);
}

std::uint64_t d_exact(int n) {
    if (n < 0 || n > 5) throw std::domain_error("kmt::d_exact: n must be in [0, 5]");
    return 1ULL << (1ULL << n);
}

std::uint64_t D_exact(int n) {
    if (n < 0 || n > 5) throw std::domain_error("kmt::D_exact: n must be in [0, 5]");
    return kD[n];
}

double log2_D(int n) {
    if (n < 0) throw std::domain_error("kmt::log2_D: n must be >= 0");
    if (n == 0) return -std::numeric_limits<double>::infinity();
    if (n <= 5) return std::log2(static_cast<double>(kD[n]));
    if (n == 6)
        return 64.0 + std::log1p(static_cast<double>(kD[5]) * 0x1.0p-64) / 0.6931471805599453094;
    // D(n-1)/d(n) <= 2^{-2^{n-1}} <= 2^{-64}: the correction vanishes at
    // double precision relative to 2^n >= 128.
    return std::ldexp(1.0, n);
}

int epoch_index(std::uint64_t m) {
    if (m < 4) throw std::domain_error("kmt::epoch_index: m must be >= 4");
    int n = 1;
    while (n < 6 && kD[n] < m) ++n;
    return n;
}

}  // namespace kmt
