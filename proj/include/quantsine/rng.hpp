#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace quantsine {

// xoshiro256++ with splitmix64 seeding. Hand-rolled because std::mt19937 and
// std::normal_distribution are not bit-identical across standard libraries,
// and reproducibility of every Monte Carlo number is part of the contract.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& w : s_) w = splitmix64(x);
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform on [0, 1) from the top 53 bits
    double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // standard normal, Box-Muller cosine branch; one normal per two uniforms,
    // nothing cached, so the draw count per replicate stays fixed
    double gaussian() {
        double u1;
        do {
            u1 = uniform01();
        } while (u1 <= 0.0);
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    static std::uint64_t rotl(std::uint64_t v, int k) {
        return (v << k) | (v >> (64 - k));
    }
    static std::uint64_t splitmix64(std::uint64_t& x) {
        x += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t s_[4];
};

// Pure function of (seed, replicate index): every replicate owns a stream, so
// accumulation order cannot change any drawn number.
inline Rng make_replicate_stream(std::uint64_t seed, std::uint64_t replicate) {
    return Rng(seed + 0x9E3779B97F4A7C15ull * (replicate + 1));
}

inline constexpr char k_gaussian_method[] = "box-muller-cos";

}  // namespace quantsine
