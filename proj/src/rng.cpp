#include "nftscan/rng.hpp"

#include <algorithm>
#include <numeric>

namespace nftscan {

std::vector<int> sample_without_replacement(int n, int k, SplitMix64& rng) {
    std::vector<int> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    // partial Fisher-Yates: first k slots become the sample
    for (int i = 0; i < k; ++i) {
        int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(k));
    std::sort(pool.begin(), pool.end());
    return pool;
}

}  // namespace nftscan
