#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace mfou {

// Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key);

// SplitMix64 finalizer, used to derive child seeds.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

// Standard normals from a counter-based stream keyed by (seed, stream). The
// k-th value depends only on (seed, stream, k).
class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::uint64_t stream);
    double next();
    void fill(double* out, std::size_t n);

private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<double, 2> buf_{};
    int pos_ = 2;
};

}  // namespace mfou
