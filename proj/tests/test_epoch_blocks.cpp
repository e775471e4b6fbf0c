#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "kmt/blocks.hpp"
#include "kmt/epoch.hpp"
#include "oracle_support.hpp"

using namespace kmt;

TEST_SUITE("epoch") {

TEST_CASE("doubly exponential ladder spot values") {
    CHECK(d_exact(1) == 4);
    CHECK(d_exact(2) == 16);
    CHECK(d_exact(3) == 256);
    CHECK(d_exact(4) == 65536);
    CHECK(D_exact(1) == 4);
    CHECK(D_exact(2) == 20);
    CHECK(D_exact(3) == 276);
    CHECK(D_exact(4) == 65812);
    CHECK(D_exact(5) == 4295033108ULL);
    // Each rung squares the previous one: log2 d(n+1) = 2 log2 d(n).
    for (int n = 1; n <= 61; ++n)
        CHECK(log2_d(n + 1) == doctest::Approx(2.0 * log2_d(n)).epsilon(1e-15));
    CHECK(log2_D(6) == doctest::Approx(64.0 + std::log1p(4295033108.0 * std::ldexp(1.0, -64)) / std::log(2.0)).epsilon(1e-15));
    CHECK(log2_D(7) == 128.0);
    CHECK(log2_D(10) == 1024.0);
}

TEST_CASE("epoch index spot values and domain") {
    CHECK_THROWS_AS((void)epoch_index(3), std::domain_error);
    CHECK(epoch_index(4) == 1);
    CHECK(epoch_index(5) == 2);
    CHECK(epoch_index(20) == 2);
    CHECK(epoch_index(21) == 3);
    CHECK(epoch_index(276) == 3);
    CHECK(epoch_index(277) == 4);
    CHECK(epoch_index(65812) == 4);
    CHECK(epoch_index(65813) == 5);
    CHECK(epoch_index(4295033108ULL) == 5);
    CHECK(epoch_index(4295033109ULL) == 6);
    CHECK(epoch_index(UINT64_MAX) == 6);
}

TEST_CASE("epoch index agrees with big-integer evaluation on a slice") {
    for (std::uint64_t m = 4; m <= 70000; ++m)
        REQUIRE(epoch_index(m) == oracle::epoch_index_bigint(m));
    for (std::uint64_t m : {4294967295ULL, 4295033108ULL, 4295033109ULL, 1ULL << 40})
        CHECK(epoch_index(m) == oracle::epoch_index_bigint(m));
}

}  // TEST_SUITE

TEST_SUITE("blocks") {

TEST_CASE("geometric fixture: each index is its own block") {
    WeightSequence w;
    for (int k = 1; k <= 64; ++k) w.u.push_back(std::ldexp(1.0, -k));
    w.tail = TailKind::geometric;
    w.ratio = 0.5;
    CHECK(w.tail_mass() == std::ldexp(1.0, -64));

    const auto part = block_partition(w);
    CHECK(part.U == 1.0);
    for (std::size_t m = 1; m <= 64; ++m) {
        CHECK(part.T[m] == std::ldexp(1.0, -static_cast<int>(m) + 1));  // exact
        CHECK(part.b_of(m) == static_cast<int>(m));
        CHECK(part.n_m(m) == m);
        CHECK(part.n_m_closed_form(m) == m);
        CHECK(power_nm(part, m) == m);
    }
    REQUIRE(part.blocks.size() == 64);
    for (const auto& blk : part.blocks) CHECK(blk.lo == blk.hi);
}

TEST_CASE("constant weights fold into dyadic bins") {
    WeightSequence w;
    w.u = {4.0, 4.0, 4.0, 4.0};
    const auto part = block_partition(w);
    CHECK(part.U == 16.0);
    CHECK(part.b_of(1) == 1);
    CHECK(part.b_of(2) == 1);
    CHECK(part.b_of(3) == 2);
    CHECK(part.b_of(4) == 3);
    CHECK(part.n_m(1) == 1);
    CHECK(part.n_m(2) == 1);
    CHECK(part.n_m(3) == 3);
    CHECK(part.n_m(4) == 4);
    for (std::size_t m = 1; m <= 4; ++m)
        CHECK(part.n_m_closed_form(m) == part.n_m(m));
    REQUIRE(part.blocks.size() == 3);
    CHECK(part.blocks[0].lo == 1);
    CHECK(part.blocks[0].hi == 2);
    CHECK(part.blocks[1].lo == 3);
    CHECK(part.blocks[1].hi == 3);
    CHECK(part.blocks[2].lo == 4);
    CHECK(part.blocks[2].hi == 4);
}

TEST_CASE("single weight") {
    WeightSequence w;
    w.u = {3.5};
    const auto part = block_partition(w);
    CHECK(part.b_of(1) == 1);
    CHECK(part.n_m(1) == 1);
    CHECK(power_nm(part, 1) == 1);
}

TEST_CASE("partition rejects vanishing or infinite mass") {
    WeightSequence zero_tailed;
    zero_tailed.u = {1.0, 0.0, 0.0};
    CHECK_THROWS_AS((void)block_partition(zero_tailed), std::domain_error);
    WeightSequence empty;
    CHECK_THROWS_AS((void)block_partition(empty), std::domain_error);
    WeightSequence bad_ratio;
    bad_ratio.u = {1.0};
    bad_ratio.tail = TailKind::geometric;
    bad_ratio.ratio = 1.0;
    CHECK_THROWS_AS((void)block_partition(bad_ratio), std::domain_error);
}

TEST_CASE("weights CSV and sidecar round trip") {
    WeightSequence w;
    w.u = {0.5, 0.25, 0.125};
    w.tail = TailKind::geometric;
    w.ratio = 0.5;
    const auto w2 = weights_from_csv(weights_to_csv(w), weights_sidecar_json(w));
    REQUIRE(w2.u.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(w2.u[i] == w.u[i]);
    CHECK(w2.tail == TailKind::geometric);
    CHECK(w2.ratio == 0.5);

    // Headerless body and non-contiguous indices.
    CHECK_NOTHROW((void)weights_from_csv("1,0.5\n2,0.25\n", "{\"type\":\"zero\"}"));
    CHECK_THROWS_AS((void)weights_from_csv("1,0.5\n3,0.25\n", "{\"type\":\"zero\"}"),
                    std::invalid_argument);
}

}  // TEST_SUITE

TEST_SUITE("slower_sequence") {

TEST_CASE("doubling sequence with zero tails picks every index") {
    // a_m = 2^m, sup_tail = 0 everywhere: n(k) = k and the closed identity
    // gives v(n(k)) = 1 + (k-1)/2.
    std::vector<double> a, tails;
    for (int m = 1; m <= 20; ++m) {
        a.push_back(std::ldexp(1.0, m));
        tails.push_back(0.0);
    }
    const auto s = slower_sequence(tails, a);
    REQUIRE(s.nk.size() == 20);
    for (std::size_t k = 0; k < s.nk.size(); ++k) {
        CHECK(s.nk[k] == k + 1);
        CHECK(s.v[s.nk[k] - 1] ==
              doctest::Approx(1.0 + 0.5 * static_cast<double>(k)).epsilon(1e-14));
    }
    CHECK(s.v[0] == 1.0);  // v = 1 on [1, n(1)]
    CHECK(s.covered == 20);
}

TEST_CASE("linear growth against the independent construction") {
    std::vector<double> a, tails;
    for (int m = 1; m <= 4000; ++m) {
        a.push_back(static_cast<double>(m));
        tails.push_back(0.25 * std::pow(0.99, m));
    }
    const auto s = slower_sequence(tails, a);
    const auto ref = oracle::slower_sequence_oracle(tails, a);
    REQUIRE(s.nk == ref.nk);
    REQUIRE(s.covered == ref.nk.back());
    for (std::size_t m = 1; m <= s.covered; ++m)
        CHECK(s.v[m - 1] == doctest::Approx(ref.v[m - 1]).epsilon(1e-12));
}

TEST_CASE("invariants of the slowed sequence") {
    std::vector<double> a, tails;
    for (int m = 1; m <= 2000; ++m) {
        a.push_back(std::pow(static_cast<double>(m), 1.5));
        tails.push_back(2.0 / std::pow(static_cast<double>(m), 1.2));
    }
    const auto s = slower_sequence(tails, a);
    REQUIRE(s.covered >= 2);
    for (std::size_t m = 1; m <= s.covered; ++m) {
        CHECK(s.abar[m - 1] <= a[m - 1] * (1.0 + 1e-12));
        CHECK(s.v[m - 1] >= 1.0 - 1e-12);
        if (m >= 2) {
            CHECK(s.abar[m - 1] >= s.abar[m - 2] * (1.0 - 1e-12));  // abar nondecreasing
            // abar/a = 1/v nonincreasing.
            CHECK(s.v[m - 1] >= s.v[m - 2] - 1e-12);
        }
    }
    // Stage bounds: 1 + (k-1)/2 <= v(n(k)) <= k.
    for (std::size_t k = 1; k <= s.nk.size(); ++k) {
        const double vk = s.v[s.nk[k - 1] - 1];
        CHECK(vk <= static_cast<double>(k) + 1e-12);
        CHECK(vk >= 1.0 + 0.5 * (static_cast<double>(k) - 1.0) - 1e-12);
    }
}

TEST_CASE("horizon exhaustion reports the failing stage") {
    std::vector<double> a(10, 1.0), tails(10, 1.0);  // sup_tail never <= 1/8
    CHECK_THROWS_WITH_AS((void)slower_sequence(tails, a),
                         doctest::Contains("horizon exhausted at k=1"),
                         std::domain_error);
    // With k_min stages required, a short horizon fails at a later stage.
    std::vector<double> a2, t2;
    for (int m = 1; m <= 3; ++m) {
        a2.push_back(static_cast<double>(m));
        t2.push_back(0.0);
    }
    CHECK_NOTHROW((void)slower_sequence(t2, a2, 2));  // n(2) = 2 fits
    CHECK_THROWS_WITH_AS((void)slower_sequence(t2, a2, 4),
                         doctest::Contains("horizon exhausted"), std::domain_error);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS((void)slower_sequence({0.0, 0.0}, {2.0, 1.0}), std::domain_error);
    CHECK_THROWS_AS((void)slower_sequence({0.0, 0.1}, {1.0, 2.0}), std::domain_error);
    CHECK_THROWS_AS((void)slower_sequence({0.0}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS((void)slower_sequence({}, {}), std::invalid_argument);
}

}  // TEST_SUITE
