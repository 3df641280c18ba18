#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <ostream>

namespace qarch {

// SplitMix64 (Steele, Lea, Flood 2014). Used to expand a user seed into
// stream seeds so that independent subsystems never share a stream.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
};

// xoshiro256** (Blackman & Vigna 2018), seeded through SplitMix64.
// All randomness in this project flows through this generator so that
// datasets, network init and agent behavior reproduce bit-for-bit from a
// single integer seed, independent of the platform's std::random engines.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& w : s_) w = sm.next();
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0, 1), 53 significant bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, bound). Computed as floor(uniform() * bound);
    // the O(bound/2^53) bias is irrelevant at the bounds used here.
    std::uint64_t uniform_int(std::uint64_t bound) {
        return static_cast<std::uint64_t>(uniform() * static_cast<double>(bound));
    }

    // Standard normal via Box-Muller. The second draw of each pair is cached.
    double normal();

    template <typename T>
    void shuffle(T* data, std::size_t n) {
        for (std::size_t i = n; i > 1; --i) {
            std::size_t j = uniform_int(i);
            std::swap(data[i - 1], data[j]);
        }
    }

    // State serialization (checkpoints).
    void save(std::ostream& os) const;
    void load(std::istream& is);

    std::array<std::uint64_t, 4> state() const { return s_; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> s_{};
    bool has_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace qarch
