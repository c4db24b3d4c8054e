#pragma once

#include <cstdint>
#include <vector>

namespace ssi {

// Counter-based generator: output n of stream s is mix(s + n*GOLDEN), the
// SplitMix64 finalizer over an affine counter. Streams are cheap to derive
// and jump-free, so replicate r of a run seeded with `seed` always draws
// from substream(seed, r) regardless of worker scheduling.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Unbiased bounded draw (Lemire with rejection).
    std::uint64_t next_below(std::uint64_t bound) {
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < bound) {
            std::uint64_t threshold = (0 - bound) % bound;
            while (lo < threshold) {
                m = static_cast<unsigned __int128>(next()) * bound;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

private:
    std::uint64_t state_;
};

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Substream derivation: hash(seed, index). Used for replicate and sweep-point
// streams so parallel execution order never affects the numbers.
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t index) {
    return mix64(seed ^ mix64(index + 0x9E3779B97F4A7C15ULL));
}

inline std::uint64_t substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return substream(substream(seed, a), b);
}

// In-place Fisher-Yates. std::shuffle's draw sequence is unspecified, so the
// determinism contract requires a hand-rolled shuffle.
template <typename T>
void shuffle(std::vector<T>& v, SplitMix64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.next_below(i));
        std::swap(v[i - 1], v[j]);
    }
}

} // namespace ssi
