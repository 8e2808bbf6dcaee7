#pragma once

#include <cstdint>
#include <vector>

namespace ppdsim {

// All randomness in the simulator flows through small per-purpose streams so
// that replicates are reproducible bit-for-bit and common-random-number
// comparisons stay aligned: every individual carries its own clinical and
// compliance streams, and run-level activities (shuffling, campaign recipient
// selection, births) each get a stream derived from (seed, tag).

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += kGolden);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Stateless mix of up to three words into a stream seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t id = 0) {
    std::uint64_t s = seed ^ (tag * 0xd1342543de82ef95ULL);
    std::uint64_t z = splitmix64(s);
    s ^= (id + 1) * kGolden;
    return z ^ splitmix64(s);
}

// Stream tags. Distinct consumers never share a stream.
enum class RngTag : std::uint64_t {
    build = 1,
    clinical = 2,
    compliance = 3,
    shuffle = 4,
    campaign = 5,
    births = 6,
    sampler = 7,
};

/// Minimal counter-style generator; 8 bytes of state, cheap enough to embed
/// one (or two) per individual.
struct Rng {
    std::uint64_t state = 0;

    Rng() = default;
    explicit Rng(std::uint64_t s) : state(s) {}
    Rng(std::uint64_t seed, RngTag tag, std::uint64_t id = 0)
        : state(mix_seed(seed, static_cast<std::uint64_t>(tag), id)) {}

    std::uint64_t next() { return splitmix64(state); }

    /// Uniform in [0, 1).
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_double() < p; }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t uniform_int(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    /// Standard normal via Box-Muller (two uniforms per draw, no caching so
    /// the draw count per call is fixed).
    double next_normal();

    /// Normal truncated to [lo, hi] by rejection; falls back to clamping the
    /// mean after 64 tries (degenerate spreads).
    double truncated_normal(double mean, double sd, double lo, double hi);
};

/// Fisher-Yates shuffle driven by `rng`.
template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.uniform_int(i));
        std::swap(v[i - 1], v[j]);
    }
}

// Draw helpers for streams embedded as raw state words (e.g. the per-individual
// clinical and compliance streams).
inline double rng_double(std::uint64_t& state) {
    return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}
inline bool rng_bernoulli(std::uint64_t& state, double p) {
    return rng_double(state) < p;
}
inline std::uint64_t rng_uniform_int(std::uint64_t& state, std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(splitmix64(state)) * n) >> 64);
}

} // namespace ppdsim
