#pragma once

#include <cstdint>
#include <vector>

namespace nftscan {

// SplitMix64 (Steele/Lea/Flood; Vigna's fixed-increment variant). Chosen as the
// model-format generator because its entire state is one word, it is trivially
// reimplementable bit-for-bit in any language, and streams can be derived by
// rehashing the seed. Identified as "splitmix64-v1" in serialized models; that
// id covers both the output function and the stream-derivation rule below.
class SplitMix64 {
  public:
    static constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ULL;

    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += golden);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform draw in [0, n) via 128-bit multiply-shift. The 2^-64-level bias is
    // far below anything the statistical contracts can see, and the mapping is
    // exactly reproducible from the raw 64-bit stream.
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool coin(double p_true) { return unit() < p_true; }

  private:
    std::uint64_t state_;
};

// Stream k of a master seed: scramble(seed + (k+1)*golden). Fixed by the
// "splitmix64-v1" identifier stored in model files; changing it is a format bump.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t k) {
    SplitMix64 g(seed + (k + 1) * SplitMix64::golden);
    return g.next();
}

template <typename T>
void shuffle_in_place(std::vector<T>& v, SplitMix64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.below(i));
        std::swap(v[i - 1], v[j]);
    }
}

// k distinct values from [0, n), ascending.
std::vector<int> sample_without_replacement(int n, int k, SplitMix64& rng);

}  // namespace nftscan
