#pragma once

#include <cstdint>
#include <vector>

#include "nftscan/cart.hpp"

namespace nftscan {

// Nested cost-complexity sequence: alphas strictly increasing starting at 0,
// leaf counts strictly decreasing, last tree is the root-only stump. Entry 0
// is the full tree except when some internal node has g = 0 on the training
// data; those collapse at alpha 0 and merge into entry 0 (equal-alpha steps
// merge, so the entry is the smallest subtree optimal at alpha 0).
struct PrunedEntry {
    double alpha = 0.0;
    DecisionTree tree;

    bool operator==(const PrunedEntry&) const = default;
};

struct PrunedSequence {
    std::vector<PrunedEntry> entries;

    bool operator==(const PrunedSequence&) const = default;
};

// Misclassification rate of the tree over the dataset.
double subtree_error(const DecisionTree& tree, const LabeledDataset& dataset);

// g(t) = (C(t) - C(T_t)) / (|leaves(T_t)| - 1) with both error terms measured
// on `dataset` and normalized by its full size; C(t) uses the node's stored
// majority prediction. `node` must be internal.
double weakest_link_g(const DecisionTree& tree, int node, const LabeledDataset& dataset);

// Weakest-link pruning: repeatedly collapse all simultaneously minimal-g
// internal nodes, recording alpha = g. Equal consecutive g values merge into
// one step.
PrunedSequence prune_sequence(const DecisionTree& tree, const LabeledDataset& dataset);

// Stratified k-fold selection over the sequence's alpha intervals: per fold,
// grow and prune on the training part, score each candidate alpha's tree on
// the held-out part, pick the alpha with the best mean accuracy (ties favor
// the larger alpha, i.e. the smaller tree), and return the matching member of
// the full-data sequence.
DecisionTree select_by_validation(const PrunedSequence& sequence, int folds,
                                  const LabeledDataset& dataset, std::uint64_t seed);

}  // namespace nftscan
