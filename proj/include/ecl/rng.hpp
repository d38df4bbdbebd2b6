#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace ecl {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t splitmix64(std::uint64_t& state) {
    return mix64(state += kGolden);
}

// Folds a tuple of stream labels into a fresh seed. Used everywhere a
// substream is needed (per individual, per epoch, per class, ...), so that
// results do not depend on evaluation order or worker count.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = mix64(base + kGolden);
    for (std::uint64_t p : parts) {
        h = mix64(h ^ (p + kGolden + (h << 6) + (h >> 2)));
    }
    return h;
}

// xoshiro256** with hand-rolled draw helpers. The standard distributions are
// implementation-defined, so rolling our own keeps streams identical across
// compilers and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, n). Unbiased via rejection sampling.
    std::uint64_t below(std::uint64_t n) {
        assert(n > 0);
        const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    // Uniform integer in [lo, hi], both inclusive.
    int range_int(int lo, int hi) {
        assert(lo <= hi);
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    // Uniform in [0, 1) with 53 bits of precision.
    double real01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * real01(); }

    bool bernoulli(double p) { return real01() < p; }

    // Standard normal draw (Box-Muller, cosine branch). One value per call;
    // the sine branch is discarded to keep the stream layout position-stable.
    double normal() {
        const double u1 = real01();
        const double u2 = real01();
        const double r = std::sqrt(-2.0 * std::log1p(-u1));
        return r * std::cos(6.283185307179586477 * u2);
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::array<std::uint64_t, 4> state_{};
};

// Stream labels for derive_seed. Values are arbitrary but frozen: changing
// them changes every seeded result.
namespace stream {
inline constexpr std::uint64_t kInitPopulation = 1;
inline constexpr std::uint64_t kEvaluate = 2;
inline constexpr std::uint64_t kSelect = 3;
inline constexpr std::uint64_t kCrossover = 4;
inline constexpr std::uint64_t kMutate = 5;
inline constexpr std::uint64_t kFullInit = 6;
inline constexpr std::uint64_t kFullTrain = 7;
inline constexpr std::uint64_t kWeightInit = 8;
inline constexpr std::uint64_t kShuffle = 9;
inline constexpr std::uint64_t kSynthClass = 10;
inline constexpr std::uint64_t kSynthSample = 11;
inline constexpr std::uint64_t kBaseline = 12;
inline constexpr std::uint64_t kNormalCell = 13;
inline constexpr std::uint64_t kReductionCell = 14;
}  // namespace stream

}  // namespace ecl
