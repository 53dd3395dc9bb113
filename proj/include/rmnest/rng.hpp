#pragma once

#include <cstdint>
#include <limits>

namespace rmnest {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Counter-based generator: output j of stream (seed, key) is a pure function
// of (seed, key, j), so any sample can be regenerated independently.
class counter_rng {
public:
    using result_type = std::uint64_t;

    counter_rng(std::uint64_t seed, std::uint64_t key)
        : base_(splitmix64(splitmix64(seed) ^ (key * 0xd1b54a32d192ed03ULL))) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return splitmix64(base_ + 0x632be59bd9b4e019ULL * ++ctr_); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // rejection for exact uniformity
        std::uint64_t lim = max() - max() % n;
        std::uint64_t x;
        do x = (*this)();
        while (x >= lim);
        return x % n;
    }

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::uint64_t base_;
    std::uint64_t ctr_ = 0;
};

}  // namespace rmnest
