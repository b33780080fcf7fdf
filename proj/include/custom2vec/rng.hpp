#pragma once

#include <cstdint>
#include <vector>

namespace c2v {

// Seeded randomness used across the pipeline. Everything here is fully
// specified arithmetic (no implementation-defined std distributions), so a
// fixed seed produces the same streams on every platform and at any worker
// count.

/// splitmix64 step: advances the state and returns the next 64-bit value.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives an independent stream seed from a base seed and stream ids.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = base;
    splitmix64(s);
    s ^= 0x632be59bd9b4e019ULL + a;
    splitmix64(s);
    s ^= 0x9e6c63d0876a9a47ULL + b;
    splitmix64(s);
    s ^= 0xd1b54a32d192ed03ULL + c;
    std::uint64_t out = s;
    splitmix64(out);
    return out;
}

/// Minimal counter-based generator. Cheap enough to construct one per walk.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

    result_type operator()() { return splitmix64(state_); }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~std::uint64_t{0}; }

private:
    std::uint64_t state_;
};

/// Uniform in [0, n) via Lemire multiply-shift; n must be > 0.
template <typename Rng>
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(rng()) * n) >> 64);
}

/// Uniform in [0, 1) with 53 bits of precision.
template <typename Rng>
inline double uniform_real(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// In-place Fisher-Yates shuffle with fully specified draw order.
template <typename Rng, typename T>
inline void shuffle(Rng& rng, std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(uniform_index(rng, i));
        std::swap(items[i - 1], items[j]);
    }
}

} // namespace c2v
