#include "nftscan/kernels/bitset_kernels.hpp"

#include <bit>

#include "nftscan/family.hpp"

namespace nftscan::kernels {

namespace detail {

std::uint64_t popcount_words_scalar(const std::uint64_t* a, std::size_t n) {
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < n; ++i) total += static_cast<std::uint64_t>(std::popcount(a[i]));
    return total;
}

std::uint64_t popcount_and_scalar(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < n; ++i)
        total += static_cast<std::uint64_t>(std::popcount(a[i] & b[i]));
    return total;
}

std::uint64_t popcount_and3_scalar(const std::uint64_t* a, const std::uint64_t* b,
                                   const std::uint64_t* c, std::size_t n) {
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < n; ++i)
        total += static_cast<std::uint64_t>(std::popcount(a[i] & b[i] & c[i]));
    return total;
}

}  // namespace detail

namespace {

struct Dispatch {
    std::uint64_t (*words)(const std::uint64_t*, std::size_t);
    std::uint64_t (*and2)(const std::uint64_t*, const std::uint64_t*, std::size_t);
    std::uint64_t (*and3)(const std::uint64_t*, const std::uint64_t*, const std::uint64_t*,
                          std::size_t);
    Backend backend;
};

constexpr Dispatch scalar_dispatch{detail::popcount_words_scalar, detail::popcount_and_scalar,
                                   detail::popcount_and3_scalar, Backend::scalar};

bool cpu_supports(Backend b) {
    switch (b) {
    case Backend::scalar: return true;
    case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
        return __builtin_cpu_supports("avx2") != 0;
#else
        return false;
#endif
    case Backend::neon:
#if defined(__aarch64__)
        return true;  // NEON is baseline on aarch64
#else
        return false;
#endif
    }
    return false;
}

Dispatch make_dispatch(Backend b) {
    switch (b) {
#if defined(__x86_64__) || defined(_M_X64)
    case Backend::avx2:
        return {detail::popcount_words_avx2, detail::popcount_and_avx2,
                detail::popcount_and3_avx2, Backend::avx2};
#endif
#if defined(__aarch64__)
    case Backend::neon:
        return {detail::popcount_words_neon, detail::popcount_and_neon,
                detail::popcount_and3_neon, Backend::neon};
#endif
    default: return scalar_dispatch;
    }
}

Dispatch detect() {
    if (cpu_supports(Backend::avx2)) return make_dispatch(Backend::avx2);
    if (cpu_supports(Backend::neon)) return make_dispatch(Backend::neon);
    return scalar_dispatch;
}

Dispatch g_dispatch = detect();

}  // namespace

Backend active_backend() { return g_dispatch.backend; }

std::string_view backend_name(Backend b) {
    switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
    }
    return "?";
}

void force_backend(Backend b) {
    if (!cpu_supports(b))
        throw Error("kernel backend '" + std::string(backend_name(b)) +
                    "' is not supported on this CPU");
    g_dispatch = make_dispatch(b);
}

void reset_backend() { g_dispatch = detect(); }

std::uint64_t popcount_words(const std::uint64_t* a, std::size_t n) {
    return g_dispatch.words(a, n);
}

std::uint64_t popcount_and(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
    return g_dispatch.and2(a, b, n);
}

std::uint64_t popcount_and3(const std::uint64_t* a, const std::uint64_t* b,
                            const std::uint64_t* c, std::size_t n) {
    return g_dispatch.and3(a, b, c, n);
}

}  // namespace nftscan::kernels
