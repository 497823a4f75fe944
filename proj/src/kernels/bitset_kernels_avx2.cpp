// AVX2 popcount variants (Mula's VPSHUFB nibble-lookup scheme). Compiled with
// -mavx2; only ever called after the dispatcher has verified CPU support.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cstddef>
#include <cstdint>

namespace nftscan::kernels::detail {

namespace {

inline __m256i popcount_epi64(__m256i v) {
    const __m256i lookup =
        _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                         0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
    const __m256i low_mask = _mm256_set1_epi8(0x0f);
    __m256i lo = _mm256_and_si256(v, low_mask);
    __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
    __m256i cnt8 =
        _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo), _mm256_shuffle_epi8(lookup, hi));
    return _mm256_sad_epu8(cnt8, _mm256_setzero_si256());
}

inline std::uint64_t horizontal_sum(__m256i acc) {
    return static_cast<std::uint64_t>(_mm256_extract_epi64(acc, 0)) +
           static_cast<std::uint64_t>(_mm256_extract_epi64(acc, 1)) +
           static_cast<std::uint64_t>(_mm256_extract_epi64(acc, 2)) +
           static_cast<std::uint64_t>(_mm256_extract_epi64(acc, 3));
}

inline std::uint64_t popcount_u64(std::uint64_t x) {
    return static_cast<std::uint64_t>(_mm_popcnt_u64(x));
}

}  // namespace

std::uint64_t popcount_words_avx2(const std::uint64_t* a, std::size_t n) {
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        acc = _mm256_add_epi64(acc, popcount_epi64(v));
    }
    std::uint64_t total = horizontal_sum(acc);
    for (; i < n; ++i) total += popcount_u64(a[i]);
    return total;
}

std::uint64_t popcount_and_avx2(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        acc = _mm256_add_epi64(acc, popcount_epi64(_mm256_and_si256(va, vb)));
    }
    std::uint64_t total = horizontal_sum(acc);
    for (; i < n; ++i) total += popcount_u64(a[i] & b[i]);
    return total;
}

std::uint64_t popcount_and3_avx2(const std::uint64_t* a, const std::uint64_t* b,
                                 const std::uint64_t* c, std::size_t n) {
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        __m256i vc = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(c + i));
        __m256i v = _mm256_and_si256(_mm256_and_si256(va, vb), vc);
        acc = _mm256_add_epi64(acc, popcount_epi64(v));
    }
    std::uint64_t total = horizontal_sum(acc);
    for (; i < n; ++i) total += popcount_u64(a[i] & b[i] & c[i]);
    return total;
}

}  // namespace nftscan::kernels::detail

#endif  // x86-64
