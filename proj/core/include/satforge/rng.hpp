#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace satforge {

/// One step of SplitMix64; used to derive independent seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t hash_string(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view stream, std::uint64_t index) {
    return splitmix64(splitmix64(master ^ hash_string(stream)) + index);
}

/// mt19937_64 with distribution helpers whose output is fully specified
/// (the std:: distributions are implementation-defined).
__extension__ typedef unsigned __int128 uint128_t;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, bound), bound > 0. Lemire's multiply-and-reject.
    std::uint64_t below(std::uint64_t bound) {
        uint128_t m = static_cast<uint128_t>(engine_()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = -bound % bound;
            while (low < threshold) {
                m = static_cast<uint128_t>(engine_()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Uniform integer in [lo, hi], inclusive.
    long long uniform_int(long long lo, long long hi) {
        return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    bool bernoulli(double p) { return uniform01() < p; }

    bool coin() { return (engine_() >> 63) != 0; }

    /// Number of trials up to and including the first success, support {1, 2, ...}.
    long long geometric_trials(double p) {
        long long k = 1;
        while (!bernoulli(p)) ++k;
        return k;
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

/// Draws k distinct values from {1..n}, uniformly, in draw order.
/// Keeps a permutation of 1..n between calls; any permutation works as a
/// starting point for a partial Fisher-Yates shuffle.
class DistinctSampler {
public:
    explicit DistinctSampler(int n) : pool_(static_cast<std::size_t>(n)) {
        for (int i = 0; i < n; ++i) pool_[static_cast<std::size_t>(i)] = i + 1;
    }

    std::vector<int> sample(int k, Rng& rng) {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(k));
        const std::size_t n = pool_.size();
        for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
            std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
            std::swap(pool_[i], pool_[j]);
            out.push_back(pool_[i]);
        }
        return out;
    }

private:
    std::vector<int> pool_;
};

} // namespace satforge
