#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "nftscan/cart.hpp"
#include "nftscan/dataset.hpp"
#include "nftscan/rng.hpp"

namespace testutil {

using namespace nftscan;

// Random boolean dataset; labels uniform unless label_from_feature is set, in
// which case the label copies that feature's bit.
inline LabeledDataset random_dataset(Family family, std::size_t n, SplitMix64& rng,
                                     int label_from_feature = -1) {
    LabeledDataset ds;
    ds.family = family;
    const int arity = family_arity(family);
    for (std::size_t i = 0; i < n; ++i) {
        Sample s;
        char buf[16];
        std::snprintf(buf, sizeof buf, "s%04zu", i);
        s.id = buf;
        s.features.family = family;
        for (int j = 0; j < arity; ++j) s.features.bits.push_back(rng.coin(0.5));
        s.label = label_from_feature >= 0
                      ? (s.features.bits[static_cast<std::size_t>(label_from_feature)] ? 1 : 0)
                      : (rng.coin(0.5) ? 1 : 0);
        ds.samples.push_back(std::move(s));
    }
    return ds;
}

// Direct per-feature weighted Gini, straight from the definition and naive
// sample loops; independent of the packed-kernel path.
inline double oracle_weighted_gini(const LabeledDataset& ds, int feature) {
    std::uint32_t l0 = 0, l1 = 0, r0 = 0, r1 = 0;
    for (const Sample& s : ds.samples) {
        bool bit = s.features.bits[static_cast<std::size_t>(feature)];
        if (bit) (s.label ? r1 : r0)++;
        else (s.label ? l1 : l0)++;
    }
    auto g = [](double a, double b) {
        double n = a + b;
        return 1.0 - (a / n) * (a / n) - (b / n) * (b / n);
    };
    const double n = static_cast<double>(ds.size());
    double value = 0.0;
    if (l0 + l1 > 0) value += ((l0 + l1) / n) * g(l0, l1);
    if (r0 + r1 > 0) value += ((r0 + r1) / n) * g(r0, r1);
    return value;
}

struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() /
               ("nftscan-test-" + tag + "-" + std::to_string(::getpid()));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return s;
}

}  // namespace testutil
