#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nftscan/dataset.hpp"

namespace nftscan {

struct ClassCounts {
    std::uint32_t n0 = 0;
    std::uint32_t n1 = 0;

    std::uint32_t total() const { return n0 + n1; }
    int majority() const { return n1 > n0 ? 1 : 0; }  // tie -> 0
    bool operator==(const ClassCounts&) const = default;
};

// Two-class Gini impurity 1 - (n0/n)^2 - (n1/n)^2, double precision from
// integer counts. Throws on an empty node.
double gini(ClassCounts counts);

// Column-packed boolean dataset: one bitmask per feature plus a label mask.
// Split counting then reduces to the popcount kernels, and a tree node's
// sample set is itself a bitmask over rows.
struct PackedDataset {
    int arity = 0;
    std::size_t n_samples = 0;
    std::size_t n_words = 0;
    std::vector<std::uint64_t> labels;
    std::vector<std::vector<std::uint64_t>> cols;

    static PackedDataset from(const LabeledDataset& dataset);
    // Row-multiset materialization (bootstrap bags); duplicates become rows.
    PackedDataset gather(std::span<const std::uint32_t> rows) const;

    std::vector<std::uint64_t> full_mask() const;
    ClassCounts counts_under(std::span<const std::uint64_t> mask) const;
};

struct TreeNode {
    bool leaf = true;
    int feature = -1;  // split feature (internal nodes)
    double gini = 0.0;
    ClassCounts counts;
    std::int32_t left = -1;   // feature == false
    std::int32_t right = -1;  // feature == true
    int prediction = 0;       // majority class, tie -> 0

    bool operator==(const TreeNode&) const = default;
};

struct TreeConfig {
    int max_depth = 0;            // root is depth 1; must be >= 1
    int min_samples_split = 2;    // >= 2
    int min_samples_leaf = 1;     // >= 1
    std::vector<int> allowed_features;  // empty = all

    bool operator==(const TreeConfig&) const = default;
};

void validate_config(const TreeConfig& config, int arity);

// Node 0 is the root. Immutable after construction; safe to share for
// prediction.
struct DecisionTree {
    Family family = Family::rmp;
    TreeConfig config;
    std::vector<TreeNode> nodes;

    const TreeNode& root() const { return nodes.front(); }
    bool operator==(const DecisionTree&) const = default;
};

int count_leaves(const DecisionTree& tree, int node = 0);
int tree_depth(const DecisionTree& tree, int node = 0);

struct SplitChoice {
    int feature = -1;
    double weighted_impurity = 0.0;
    ClassCounts left, right;
};

// Σ |D_i|/|D| * gini(D_i) over the false/true partition of one feature; an
// empty side contributes 0.
double weighted_gini(const LabeledDataset& dataset, int feature_index);

// Minimal weighted impurity over the allowed features (ties -> lowest index);
// nullopt when no feature yields two nonempty sides or none strictly reduces
// the node impurity.
std::optional<SplitChoice> best_split(const LabeledDataset& dataset,
                                      std::span<const int> allowed_features = {});
std::optional<SplitChoice> best_split_packed(const PackedDataset& data,
                                             std::span<const std::uint64_t> mask,
                                             ClassCounts node_counts,
                                             std::span<const int> allowed_features);

// Index of the smallest impurity, ties -> lowest index. The feature-selection
// rule in one place (split search and reporting share it).
int select_min_impurity(std::span<const double> impurities);

// Per-split feature subset hook supplied by the forest; called once per
// attempted split, in node construction order (preorder, false child first).
using FeatureSampler = std::function<std::vector<int>(int arity)>;

DecisionTree build_tree(const LabeledDataset& dataset, const TreeConfig& config,
                        const FeatureSampler& sampler = nullptr);
DecisionTree build_tree_packed(const PackedDataset& data, Family family,
                               const TreeConfig& config,
                               const FeatureSampler& sampler = nullptr);

int predict(const DecisionTree& tree, const FeatureVector& fv);
ClassCounts predict_counts(const DecisionTree& tree, const FeatureVector& fv);

// Graphviz digraph; internal nodes read "<code> <= 0.5" with gini/samples/
// value lines, leaves add a class line; edges are labeled False/True.
std::string export_dot(const DecisionTree& tree);

}  // namespace nftscan
