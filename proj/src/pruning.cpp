#include "nftscan/pruning.hpp"

#include <algorithm>
#include <cmath>

#include "nftscan/dataset.hpp"
#include "nftscan/rng.hpp"

namespace nftscan {

namespace {

struct NodeStats {
    ClassCounts routed;           // dataset samples reaching the node
    std::int64_t miss_leaf = 0;   // misses if collapsed to its stored majority
    std::int64_t miss_subtree = 0;
    int leaves = 0;
};

std::vector<NodeStats> route_stats(const DecisionTree& tree, const LabeledDataset& dataset) {
    std::vector<NodeStats> stats(tree.nodes.size());
    for (const Sample& s : dataset.samples) {
        int idx = 0;
        for (;;) {
            const TreeNode& node = tree.nodes[static_cast<std::size_t>(idx)];
            auto& r = stats[static_cast<std::size_t>(idx)].routed;
            if (s.label) ++r.n1;
            else ++r.n0;
            if (node.leaf) break;
            idx = s.features.bits[static_cast<std::size_t>(node.feature)] ? node.right
                                                                          : node.left;
        }
    }
    // bottom-up aggregation; children always have larger indices than their parent
    for (std::size_t i = tree.nodes.size(); i-- > 0;) {
        const TreeNode& node = tree.nodes[i];
        NodeStats& st = stats[i];
        st.miss_leaf = node.prediction == 0 ? st.routed.n1 : st.routed.n0;
        if (node.leaf) {
            st.miss_subtree = st.miss_leaf;
            st.leaves = 1;
        } else {
            const NodeStats& l = stats[static_cast<std::size_t>(node.left)];
            const NodeStats& r = stats[static_cast<std::size_t>(node.right)];
            st.miss_subtree = l.miss_subtree + r.miss_subtree;
            st.leaves = l.leaves + r.leaves;
        }
    }
    return stats;
}

// g as the exact rational (miss_leaf - miss_subtree) / (N * (leaves - 1)); N
// is common to every node, so comparisons drop it.
struct ExactG {
    std::int64_t num = 0;
    std::int64_t den = 1;  // leaves - 1

    static int compare(const ExactG& a, const ExactG& b) {
        const std::int64_t lhs = a.num * b.den;
        const std::int64_t rhs = b.num * a.den;
        return lhs < rhs ? -1 : lhs > rhs ? 1 : 0;
    }
};

// Rebuilds the arena keeping only reachable nodes, preorder.
DecisionTree compact(const DecisionTree& tree) {
    DecisionTree out;
    out.family = tree.family;
    out.config = tree.config;
    struct Copier {
        const DecisionTree& src;
        DecisionTree& dst;
        int copy(int idx) {
            const TreeNode& n = src.nodes[static_cast<std::size_t>(idx)];
            int at = static_cast<int>(dst.nodes.size());
            dst.nodes.push_back(n);
            if (!n.leaf) {
                int l = copy(n.left);
                int r = copy(n.right);
                dst.nodes[static_cast<std::size_t>(at)].left = l;
                dst.nodes[static_cast<std::size_t>(at)].right = r;
            }
            return at;
        }
    };
    Copier{tree, out}.copy(0);
    return out;
}

std::vector<int> parents_of(const DecisionTree& tree) {
    std::vector<int> parent(tree.nodes.size(), -1);
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        const TreeNode& n = tree.nodes[i];
        if (!n.leaf) {
            parent[static_cast<std::size_t>(n.left)] = static_cast<int>(i);
            parent[static_cast<std::size_t>(n.right)] = static_cast<int>(i);
        }
    }
    return parent;
}

}  // namespace

double subtree_error(const DecisionTree& tree, const LabeledDataset& dataset) {
    if (dataset.samples.empty()) throw Error("subtree_error of an empty dataset");
    std::size_t miss = 0;
    for (const Sample& s : dataset.samples)
        if (predict(tree, s.features) != s.label) ++miss;
    return static_cast<double>(miss) / static_cast<double>(dataset.size());
}

double weakest_link_g(const DecisionTree& tree, int node, const LabeledDataset& dataset) {
    if (tree.nodes[static_cast<std::size_t>(node)].leaf)
        throw Error("weakest_link_g of a leaf node");
    auto stats = route_stats(tree, dataset);
    const NodeStats& st = stats[static_cast<std::size_t>(node)];
    const double n = static_cast<double>(dataset.size());
    return (static_cast<double>(st.miss_leaf - st.miss_subtree) / n) /
           static_cast<double>(st.leaves - 1);
}

PrunedSequence prune_sequence(const DecisionTree& tree, const LabeledDataset& dataset) {
    if (dataset.samples.empty()) throw Error("prune_sequence of an empty dataset");
    PrunedSequence seq;
    DecisionTree cur = tree;
    seq.entries.push_back({0.0, compact(cur)});
    ExactG last{0, 1};
    const double n = static_cast<double>(dataset.size());

    for (;;) {
        bool any_internal =
            std::any_of(cur.nodes.begin(), cur.nodes.end(), [](const TreeNode& t) {
                return !t.leaf;
            });
        if (!any_internal) break;

        auto stats = route_stats(cur, dataset);
        ExactG gmin;
        bool have_min = false;
        for (std::size_t i = 0; i < cur.nodes.size(); ++i) {
            if (cur.nodes[i].leaf) continue;
            const NodeStats& st = stats[i];
            ExactG g{st.miss_leaf - st.miss_subtree, st.leaves - 1};
            if (!have_min || ExactG::compare(g, gmin) < 0) {
                gmin = g;
                have_min = true;
            }
        }

        // collapse every minimal node not below another minimal node
        auto parent = parents_of(cur);
        std::vector<char> minimal(cur.nodes.size(), 0);
        for (std::size_t i = 0; i < cur.nodes.size(); ++i) {
            if (cur.nodes[i].leaf) continue;
            ExactG g{stats[i].miss_leaf - stats[i].miss_subtree, stats[i].leaves - 1};
            minimal[i] = ExactG::compare(g, gmin) == 0;
        }
        for (std::size_t i = 0; i < cur.nodes.size(); ++i) {
            if (!minimal[i]) continue;
            bool nested = false;
            for (int p = parent[i]; p != -1; p = parent[static_cast<std::size_t>(p)])
                if (minimal[static_cast<std::size_t>(p)]) {
                    nested = true;
                    break;
                }
            if (nested) continue;
            TreeNode& node = cur.nodes[i];
            node.leaf = true;
            node.feature = -1;
            node.left = node.right = -1;
        }
        cur = compact(cur);

        const double alpha =
            (static_cast<double>(gmin.num) / n) / static_cast<double>(gmin.den);
        if (ExactG::compare(gmin, last) == 0) {
            seq.entries.back().tree = cur;  // merge equal-alpha steps
        } else {
            seq.entries.push_back({alpha, cur});
            last = gmin;
        }
    }
    return seq;
}

DecisionTree select_by_validation(const PrunedSequence& sequence, int folds,
                                  const LabeledDataset& dataset, std::uint64_t seed) {
    if (sequence.entries.empty()) throw Error("select_by_validation of an empty sequence");
    if (sequence.entries.size() == 1) return sequence.entries.front().tree;
    if (folds < 2) throw Error("folds must be >= 2");

    const std::size_t n_alpha = sequence.entries.size();
    // representative alpha per interval: geometric mean of the endpoints,
    // the last interval keeps its left endpoint
    std::vector<double> rep(n_alpha);
    for (std::size_t k = 0; k + 1 < n_alpha; ++k)
        rep[k] = std::sqrt(sequence.entries[k].alpha * sequence.entries[k + 1].alpha);
    rep[n_alpha - 1] = sequence.entries[n_alpha - 1].alpha;

    auto fold_of = stratified_folds(dataset, folds, derive_stream(seed, 0xCF));
    std::vector<double> mean_acc(n_alpha, 0.0);
    const TreeConfig& config = sequence.entries.front().tree.config;

    for (int fold = 0; fold < folds; ++fold) {
        LabeledDataset train = subset_by_fold(dataset, fold_of, fold, false);
        LabeledDataset held = subset_by_fold(dataset, fold_of, fold, true);
        if (train.samples.empty() || held.samples.empty())
            throw Error("fold construction produced an empty part");
        DecisionTree grown = build_tree(train, config);
        PrunedSequence fold_seq = prune_sequence(grown, train);
        for (std::size_t k = 0; k < n_alpha; ++k) {
            // largest fold alpha not exceeding the candidate
            std::size_t pick = 0;
            for (std::size_t j = 0; j < fold_seq.entries.size(); ++j)
                if (fold_seq.entries[j].alpha <= rep[k]) pick = j;
            mean_acc[k] += 1.0 - subtree_error(fold_seq.entries[pick].tree, held);
        }
    }

    std::size_t best = 0;
    for (std::size_t k = 0; k < n_alpha; ++k)
        if (mean_acc[k] >= mean_acc[best]) best = k;  // ties -> larger alpha
    return sequence.entries[best].tree;
}

}  // namespace nftscan
