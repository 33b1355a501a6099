#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace socon {

// Deterministic splitmix64 generator. Used everywhere instead of <random>
// engines/distributions so that streams are stable across platforms and
// standard-library versions, and so that child streams can be derived
// hierarchically (seed -> country -> participant -> day) without the parent
// stream's consumption pattern affecting the children.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), state_(seed) {}

    std::uint64_t next_u64();

    // Uniform in [0, 1).
    double next_double();
    double uniform(double lo, double hi);

    // Uniform integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n);
    // Uniform integer in [lo, hi] inclusive.
    long long uniform_int(long long lo, long long hi);

    bool bernoulli(double p);

    // Standard normal via Box-Muller; the spare value is cached.
    double normal();
    double normal(double mean, double sd);

    int poisson(double lambda);

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Child streams are derived from the construction seed, not the mutated
    // state, so derivation order is independent of how much the parent drew.
    static std::uint64_t mix(std::uint64_t a, std::uint64_t b);
    static std::uint64_t mix(std::uint64_t a, std::string_view key);
    Rng derive(std::uint64_t key) const { return Rng(mix(seed_, key)); }
    Rng derive(std::string_view key) const { return Rng(mix(seed_, key)); }
    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace socon
