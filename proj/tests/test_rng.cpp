#include "mfou/rng.hpp"
#include "mfou/stats.hpp"

#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

using namespace mfou;

TEST_SUITE("rng") {

TEST_CASE("Philox4x32-10 known-answer vectors") {
    using A4 = std::array<std::uint32_t, 4>;
    CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are pure functions of (seed, stream, position)") {
    NormalStream a(42, 7), b(42, 7);
    std::vector<double> x(101), y(101);
    a.fill(x.data(), x.size());
    for (auto& v : y) v = b.next();
    CHECK(x == y);

    NormalStream c(42, 8), d(43, 7);
    CHECK(c.next() != x[0]);
    CHECK(d.next() != x[0]);
}

TEST_CASE("odd-length fills continue the same sequence") {
    NormalStream a(9, 1), b(9, 1);
    std::vector<double> whole(10), part(10);
    a.fill(whole.data(), 10);
    b.fill(part.data(), 3);
    b.fill(part.data() + 3, 7);
    CHECK(whole == part);
}

TEST_CASE("derived seeds do not collide on a small lattice") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t n : {50u, 100u, 200u, 400u}) {
        for (std::uint64_t m = 0; m < 1000; ++m) seen.insert(derive_seed(1, n, m));
    }
    CHECK(seen.size() == 4000);
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
}

TEST_CASE("normal draws pass moment and KS checks") {
    NormalStream s(2024, 0);
    std::vector<double> v(200000);
    s.fill(v.data(), v.size());
    const auto m = stats::moments(v);
    const double se = 1.0 / std::sqrt(static_cast<double>(v.size()));
    CHECK(std::fabs(m.mean) < 4 * se);
    CHECK(std::fabs(m.variance - 1.0) < 4 * std::sqrt(2.0) * se);
    CHECK(std::fabs(m.skewness) < 4 * m.skewness_se);
    CHECK(std::fabs(m.excess_kurtosis) < 4 * m.kurtosis_se);
    CHECK(stats::ks_normal(v, 0.0, 1.0) < stats::ks_critical_1pct(v.size()));
}

}
