#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "nftscan/forest.hpp"

namespace nftscan {

struct GridSpec {
    std::vector<int> max_features_values;
    std::vector<int> n_trees_values;
    std::vector<int> max_depth_values;
    int folds = 5;
    std::uint64_t seed = 0;
    // min_samples_split and min_samples_leaf are fixed at 2 for every cell.

    bool operator==(const GridSpec&) const = default;
};

// The search space used when the caller does not supply one: max_features
// 2..arity, n_trees {25, 50, 55, 75, 100}, max_depth 2..10.
GridSpec default_grid(Family family, int folds = 5, std::uint64_t seed = 0);

struct GridCell {
    int max_features = 0;
    int n_trees = 0;
    int max_depth = 0;
    double mean_accuracy = 0.0;
    std::vector<double> fold_accuracies;
    double mean_precision = 0.0;  // reported alongside, never ranked on
    double mean_recall = 0.0;

    bool operator==(const GridCell&) const = default;
};

struct GridSearchResult {
    std::vector<GridCell> cells;  // axis-lexicographic order
    std::size_t best_index = 0;

    const GridCell& best() const { return cells.at(best_index); }
    bool operator==(const GridSearchResult&) const = default;
};

// Forest seed for one (cell, fold) evaluation; part of the tuning contract so
// an external loop can reproduce grid_search cell by cell.
std::uint64_t cell_seed(std::uint64_t grid_seed, int max_features, int n_trees, int max_depth,
                        int fold);

// Exhaustive stratified-CV evaluation of the full grid. Fold assignment is
// built once from the seed and shared by every cell, so comparisons are
// paired. Best cell = highest mean accuracy, ties -> fewer trees, then
// smaller depth, then fewer features.
GridSearchResult grid_search(const LabeledDataset& dataset, const GridSpec& grid);

// Table of per-family tuned settings (max_features, n_trees, max_depth).
struct FamilyPreset {
    int max_features = 0;
    int n_trees = 0;
    int max_depth = 0;

    bool operator==(const FamilyPreset&) const = default;
};

FamilyPreset builtin_preset(Family family);
std::vector<std::pair<Family, FamilyPreset>> builtin_presets();

ForestConfig preset_config(Family family, std::uint64_t seed);

// Plot-ready CSV: header max_features,n_trees,max_depth,mean_cv_accuracy,
// fold_accuracies; fold accuracies are ';'-joined inside the last field.
void export_surface(const GridSearchResult& result, const std::filesystem::path& path);
std::string surface_csv(const GridSearchResult& result);

}  // namespace nftscan
