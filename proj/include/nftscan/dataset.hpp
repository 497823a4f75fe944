#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "nftscan/family.hpp"

namespace nftscan {

// Ordered boolean features for one family; bit i carries code prefix+1+i
// (A1..A6, B1..B8, ...).
struct FeatureVector {
    Family family = Family::rmp;
    std::vector<bool> bits;

    bool operator==(const FeatureVector&) const = default;
};

struct Sample {
    std::string id;
    FeatureVector features;
    int label = 0;  // 0 or 1

    bool operator==(const Sample&) const = default;
};

struct LabeledDataset {
    Family family = Family::rmp;
    std::vector<Sample> samples;

    int arity() const { return family_arity(family); }
    std::size_t size() const { return samples.size(); }
    bool operator==(const LabeledDataset&) const = default;
};

struct LabelTable {
    Family family = Family::rmp;
    std::map<std::string, int> entries;  // id -> label in {0,1}

    bool operator==(const LabelTable&) const = default;
};

// Label CSV reader. Accepts the full feature-table shape
// `File,<code1>..<codeN>,Risk` (codes must match the family) or the label-only
// shape `File,Risk`; feature cells, when present, must parse as False/True.
LabelTable read_labels(const std::filesystem::path& csv_path, Family family);

// Feature-table CSV, shaped exactly like the sample data table: header
// `File,A1..A6,Risk`, cells `False`/`True`, label `0`/`1`, `\n`-terminated rows.
void write_feature_csv(const LabeledDataset& dataset, const std::filesystem::path& path);
LabeledDataset read_feature_csv(const std::filesystem::path& path, Family family);

// Infers the family from a feature CSV header (A1.. -> RMP etc.).
Family feature_csv_family(const std::filesystem::path& path);

// Stratified split: per-class test counts are round(class_size * test_fraction);
// both parts keep the dataset's sample order. Deterministic per seed.
std::pair<LabeledDataset, LabeledDataset> split_dataset(const LabeledDataset& dataset,
                                                        double test_fraction,
                                                        std::uint64_t seed);

// Stratified k-fold assignment: result[i] is the fold of sample i. Every class
// must have at least `folds` samples. Deterministic per seed.
std::vector<int> stratified_folds(const LabeledDataset& dataset, int folds, std::uint64_t seed);

LabeledDataset subset_by_fold(const LabeledDataset& dataset, const std::vector<int>& fold_of,
                              int fold, bool keep_fold);

}  // namespace nftscan
