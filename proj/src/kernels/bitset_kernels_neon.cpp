// NEON popcount variants (vcntq_u8 + widening pairwise adds). NEON is baseline
// on aarch64, so these need no runtime CPU check beyond the arch guard.

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cstddef>
#include <cstdint>

namespace nftscan::kernels::detail {

namespace {

inline std::uint64_t lane_popcount(uint8x16_t v) {
    return vaddvq_u64(vpaddlq_u32(vpaddlq_u16(vpaddlq_u8(vcntq_u8(v)))));
}

}  // namespace

std::uint64_t popcount_words_neon(const std::uint64_t* a, std::size_t n) {
    std::uint64_t total = 0;
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        uint8x16_t v = vreinterpretq_u8_u64(vld1q_u64(a + i));
        total += lane_popcount(v);
    }
    for (; i < n; ++i) total += static_cast<std::uint64_t>(__builtin_popcountll(a[i]));
    return total;
}

std::uint64_t popcount_and_neon(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
    std::uint64_t total = 0;
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        uint64x2_t va = vld1q_u64(a + i);
        uint64x2_t vb = vld1q_u64(b + i);
        total += lane_popcount(vreinterpretq_u8_u64(vandq_u64(va, vb)));
    }
    for (; i < n; ++i) total += static_cast<std::uint64_t>(__builtin_popcountll(a[i] & b[i]));
    return total;
}

std::uint64_t popcount_and3_neon(const std::uint64_t* a, const std::uint64_t* b,
                                 const std::uint64_t* c, std::size_t n) {
    std::uint64_t total = 0;
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        uint64x2_t va = vld1q_u64(a + i);
        uint64x2_t vb = vld1q_u64(b + i);
        uint64x2_t vc = vld1q_u64(c + i);
        total += lane_popcount(vreinterpretq_u8_u64(vandq_u64(vandq_u64(va, vb), vc)));
    }
    for (; i < n; ++i)
        total += static_cast<std::uint64_t>(__builtin_popcountll(a[i] & b[i] & c[i]));
    return total;
}

}  // namespace nftscan::kernels::detail

#endif  // aarch64
