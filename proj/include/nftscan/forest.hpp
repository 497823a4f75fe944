#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nftscan/cart.hpp"
#include "nftscan/rng.hpp"

namespace nftscan {

enum class FeatureMode { per_split, per_tree };

struct ForestConfig {
    int n_trees = 0;
    int max_features = 0;  // in [1, family arity]
    int max_depth = 0;
    int min_samples_split = 2;
    int min_samples_leaf = 2;
    bool bootstrap = true;
    bool prune_trees = false;
    FeatureMode feature_mode = FeatureMode::per_split;
    std::uint64_t seed = 0;

    bool operator==(const ForestConfig&) const = default;
};

// Trained bagged forest. Tree i is grown from bags[i] (a sorted index
// multiset over the sorted-by-id training set) with an rng stream derived
// from (seed, i), so serial and parallel training agree bit for bit.
struct ForestModel {
    Family family = Family::rmp;
    ForestConfig config;
    std::size_t n_samples = 0;  // training-set size; every bag has this many draws
    std::vector<DecisionTree> trees;
    std::vector<std::vector<std::uint32_t>> bags;

    bool operator==(const ForestModel&) const = default;
};

inline constexpr std::string_view model_rng_id = "splitmix64-v1";
inline constexpr int model_format_version = 1;

// n draws with replacement from [0, n), sorted.
std::vector<std::uint32_t> bootstrap_sample(std::size_t n, SplitMix64& rng);

ForestModel train_forest(const LabeledDataset& dataset, const ForestConfig& config);

int predict_forest(const ForestModel& model, const FeatureVector& fv);
std::pair<int, int> predict_votes(const ForestModel& model, const FeatureVector& fv);

// Majority vote per sample over the trees whose bag excludes it; accuracy over
// samples with at least one such tree. Requires bootstrap training.
double oob_score(const ForestModel& model, const LabeledDataset& dataset);

void save_model(const ForestModel& model, const std::filesystem::path& path);
ForestModel load_model(const std::filesystem::path& path);
std::string serialize_model(const ForestModel& model);
ForestModel deserialize_model(const std::string& text);

}  // namespace nftscan
