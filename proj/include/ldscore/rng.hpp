#pragma once
// Seeded pseudo-random source shared by every stochastic routine.
//
// Generator: SplitMix64 (64-bit state, increment 0x9E3779B97F4A7C15, the
// standard Stafford "Mix13" finalizer). Streams: stream(master, id) seeds a
// fresh generator with mix(master + (id + 1) * 0x9E3779B97F4A7C15), so work
// items drawing from distinct ids never share a sequence and results do not
// depend on execution order.
//
// Derived draws:
//   uniform()   -> (next() >> 11) * 2^-53, in [0, 1)
//   below(n)    -> rejection sampling: reject x < (2^64 - n) mod n, return x mod n
//   normal()    -> Box-Muller on two uniforms, cosine branch only
//   shuffle(v)  -> Fisher-Yates, i from n-1 down to 1, swap(v[i], v[below(i + 1)])

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

namespace ldscore {

class SplitMix64 {
public:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static SplitMix64 stream(std::uint64_t master, std::uint64_t id) {
        return SplitMix64(mix(master + (id + 1) * kGamma));
    }

    std::uint64_t next() {
        state_ += kGamma;
        return mix(state_);
    }

    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t x = next();
            if (x >= threshold) return x % n;
        }
    }

    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t state_;
};

}  // namespace ldscore
