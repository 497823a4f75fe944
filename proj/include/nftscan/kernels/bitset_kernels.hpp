#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

// Popcount kernels over packed 64-bit words. These sit under every split
// search in tree training: a node's sample set, a feature column, and the
// label column are bitmasks, and class counts reduce to popcount(a & b) and
// popcount(a & b & c). Scalar reference implementations always exist; an
// AVX2 variant (x86-64) or a NEON variant (aarch64) is selected at runtime
// when the CPU supports it. All variants return identical values on all
// inputs; tests enforce the equivalence.

namespace nftscan::kernels {

enum class Backend { scalar, avx2, neon };

Backend active_backend();
std::string_view backend_name(Backend b);

// Forces a specific backend (tests use this to compare variants on the same
// hardware). Throws nftscan::Error if the CPU cannot run it.
void force_backend(Backend b);
void reset_backend();

std::uint64_t popcount_words(const std::uint64_t* a, std::size_t n);
std::uint64_t popcount_and(const std::uint64_t* a, const std::uint64_t* b, std::size_t n);
std::uint64_t popcount_and3(const std::uint64_t* a, const std::uint64_t* b,
                            const std::uint64_t* c, std::size_t n);

namespace detail {
std::uint64_t popcount_words_scalar(const std::uint64_t* a, std::size_t n);
std::uint64_t popcount_and_scalar(const std::uint64_t* a, const std::uint64_t* b, std::size_t n);
std::uint64_t popcount_and3_scalar(const std::uint64_t* a, const std::uint64_t* b,
                                   const std::uint64_t* c, std::size_t n);
#if defined(__x86_64__) || defined(_M_X64)
std::uint64_t popcount_words_avx2(const std::uint64_t* a, std::size_t n);
std::uint64_t popcount_and_avx2(const std::uint64_t* a, const std::uint64_t* b, std::size_t n);
std::uint64_t popcount_and3_avx2(const std::uint64_t* a, const std::uint64_t* b,
                                 const std::uint64_t* c, std::size_t n);
#endif
#if defined(__aarch64__)
std::uint64_t popcount_words_neon(const std::uint64_t* a, std::size_t n);
std::uint64_t popcount_and_neon(const std::uint64_t* a, const std::uint64_t* b, std::size_t n);
std::uint64_t popcount_and3_neon(const std::uint64_t* a, const std::uint64_t* b,
                                 const std::uint64_t* c, std::size_t n);
#endif
}  // namespace detail

}  // namespace nftscan::kernels
