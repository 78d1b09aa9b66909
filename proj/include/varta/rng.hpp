#pragma once

#include <array>
#include <cstdint>

namespace varta {

/**
 * xoshiro256** 1.0 (Blackman & Vigna), state seeded by splitmix64 from a 64-bit
 * seed. jump() advances by 2^128 draws; stream(seed, i) is the generator seeded
 * with @p seed followed by i jumps, giving non-overlapping parallel streams.
 */
class Xoshiro256 {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256(std::uint64_t seed);

    static Xoshiro256 stream(std::uint64_t seed, std::uint64_t index);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    result_type operator()();
    void jump();

    /// Uniform on the open interval (0, 1) with 53-bit resolution.
    double uniform();
    /// Standard normal by inversion of the uniform through normal_quantile.
    double normal();

private:
    std::array<std::uint64_t, 4> s_{};
};

/// Seed plus the generator label recorded alongside results.
struct RngSpec {
    std::uint64_t seed = 0;
    static constexpr const char* algorithm = "xoshiro256** / splitmix64 seeding / normal by inversion";
};

}  // namespace varta
