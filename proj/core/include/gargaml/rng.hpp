#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace gargaml {

// Deterministic splitmix64 stream. All randomness in the library flows through
// this so that identical seeds give identical results on every platform; the
// standard <random> distributions make no such guarantee.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Unbiased integer in [0, bound). bound must be > 0.
    std::uint64_t uniform_u64(std::uint64_t bound) {
        const std::uint64_t threshold = (-bound) % bound;
        for (;;) {
            const std::uint64_t x = next_u64();
            if (x >= threshold) return x % bound;
        }
    }

    // Uniform double in [0, 1).
    double uniform_real() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform_real() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[uniform_u64(i)]);
        }
    }

    // k distinct values from [0, population), in draw order.
    std::vector<std::uint64_t> sample_without_replacement(std::uint64_t population, std::size_t k);

    // Named sub-stream derivation: one user-facing seed, independent streams
    // per purpose ("base", "inject", "louvain", "split", ...).
    static std::uint64_t derive(std::uint64_t seed, std::string_view stream_name) {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (char c : stream_name) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ULL;
        }
        Rng mixer(seed ^ h);
        return mixer.next_u64();
    }

private:
    std::uint64_t state_;
};

inline std::vector<std::uint64_t> Rng::sample_without_replacement(std::uint64_t population,
                                                                  std::size_t k) {
    std::vector<std::uint64_t> out;
    out.reserve(k);
    if (k == 0 || population == 0) return out;
    if (k * 3 >= population) {
        // Dense case: partial Fisher-Yates over the whole range.
        std::vector<std::uint64_t> pool(population);
        for (std::uint64_t i = 0; i < population; ++i) pool[i] = i;
        for (std::size_t i = 0; i < k && i < pool.size(); ++i) {
            const std::uint64_t j = i + uniform_u64(pool.size() - i);
            std::swap(pool[i], pool[j]);
            out.push_back(pool[i]);
        }
        return out;
    }
    // Sparse case: rejection sampling.
    std::vector<std::uint64_t> seen;
    while (out.size() < k) {
        const std::uint64_t x = uniform_u64(population);
        bool dup = false;
        for (std::uint64_t s : out) {
            if (s == x) { dup = true; break; }
        }
        if (!dup) out.push_back(x);
    }
    return out;
}

}  // namespace gargaml
