#include <doctest.h>

#include <vector>

#include "nftscan/family.hpp"
#include "nftscan/kernels/bitset_kernels.hpp"
#include "nftscan/rng.hpp"

using namespace nftscan;
using namespace nftscan::kernels;

namespace {

std::vector<std::uint64_t> random_words(std::size_t n, SplitMix64& rng) {
    std::vector<std::uint64_t> w(n);
    for (auto& x : w) x = rng.next();
    return w;
}

struct BackendGuard {
    ~BackendGuard() { reset_backend(); }
};

}  // namespace

TEST_CASE("scalar kernels count exactly") {
    std::vector<std::uint64_t> a{0xFFFFFFFFFFFFFFFFULL, 0x0, 0x1};
    std::vector<std::uint64_t> b{0x00000000FFFFFFFFULL, 0xF, 0x1};
    CHECK(detail::popcount_words_scalar(a.data(), a.size()) == 65);
    CHECK(detail::popcount_and_scalar(a.data(), b.data(), a.size()) == 33);
    std::vector<std::uint64_t> c{0xFULL, 0xFULL, 0xFULL};
    CHECK(detail::popcount_and3_scalar(a.data(), b.data(), c.data(), a.size()) == 5);
}

TEST_CASE("every available backend agrees with the scalar reference") {
    BackendGuard guard;
    SplitMix64 rng(2024);
    for (Backend b : {Backend::scalar, Backend::avx2, Backend::neon}) {
        try {
            force_backend(b);
        } catch (const Error&) {
            continue;  // CPU cannot run this variant
        }
        // cover the vector body, the tail loop, and empty input
        for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 16u, 33u, 64u}) {
            auto x = random_words(n, rng);
            auto y = random_words(n, rng);
            auto z = random_words(n, rng);
            CHECK(popcount_words(x.data(), n) == detail::popcount_words_scalar(x.data(), n));
            CHECK(popcount_and(x.data(), y.data(), n) ==
                  detail::popcount_and_scalar(x.data(), y.data(), n));
            CHECK(popcount_and3(x.data(), y.data(), z.data(), n) ==
                  detail::popcount_and3_scalar(x.data(), y.data(), z.data(), n));
        }
    }
}

TEST_CASE("forcing an unsupported backend throws") {
    BackendGuard guard;
#if defined(__x86_64__)
    CHECK_THROWS_AS(force_backend(Backend::neon), nftscan::Error);
#else
    CHECK_THROWS_AS(force_backend(Backend::avx2), nftscan::Error);
#endif
}
