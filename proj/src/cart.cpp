#include "nftscan/cart.hpp"

#include <algorithm>
#include <cstdio>

#include "nftscan/kernels/bitset_kernels.hpp"

namespace nftscan {

double gini(ClassCounts counts) {
    const std::uint32_t n = counts.total();
    if (n == 0) throw Error("gini of an empty node");
    const double p0 = static_cast<double>(counts.n0) / static_cast<double>(n);
    const double p1 = static_cast<double>(counts.n1) / static_cast<double>(n);
    return 1.0 - p0 * p0 - p1 * p1;
}

PackedDataset PackedDataset::from(const LabeledDataset& dataset) {
    PackedDataset p;
    p.arity = dataset.arity();
    p.n_samples = dataset.size();
    p.n_words = (p.n_samples + 63) / 64;
    p.labels.assign(p.n_words, 0);
    p.cols.assign(static_cast<std::size_t>(p.arity), std::vector<std::uint64_t>(p.n_words, 0));
    for (std::size_t i = 0; i < p.n_samples; ++i) {
        const Sample& s = dataset.samples[i];
        if (s.features.bits.size() != static_cast<std::size_t>(p.arity))
            throw Error("sample '" + s.id + "' has arity " +
                        std::to_string(s.features.bits.size()) + ", expected " +
                        std::to_string(p.arity));
        if (s.label) p.labels[i / 64] |= 1ULL << (i % 64);
        for (int j = 0; j < p.arity; ++j)
            if (s.features.bits[static_cast<std::size_t>(j)])
                p.cols[static_cast<std::size_t>(j)][i / 64] |= 1ULL << (i % 64);
    }
    return p;
}

PackedDataset PackedDataset::gather(std::span<const std::uint32_t> rows) const {
    PackedDataset p;
    p.arity = arity;
    p.n_samples = rows.size();
    p.n_words = (p.n_samples + 63) / 64;
    p.labels.assign(p.n_words, 0);
    p.cols.assign(static_cast<std::size_t>(arity), std::vector<std::uint64_t>(p.n_words, 0));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::uint32_t r = rows[i];
        if ((labels[r / 64] >> (r % 64)) & 1) p.labels[i / 64] |= 1ULL << (i % 64);
        for (int j = 0; j < arity; ++j) {
            const auto& col = cols[static_cast<std::size_t>(j)];
            if ((col[r / 64] >> (r % 64)) & 1)
                p.cols[static_cast<std::size_t>(j)][i / 64] |= 1ULL << (i % 64);
        }
    }
    return p;
}

std::vector<std::uint64_t> PackedDataset::full_mask() const {
    std::vector<std::uint64_t> mask(n_words, ~0ULL);
    if (n_samples % 64 != 0 && n_words > 0) mask.back() = (1ULL << (n_samples % 64)) - 1;
    return mask;
}

ClassCounts PackedDataset::counts_under(std::span<const std::uint64_t> mask) const {
    const auto n = static_cast<std::uint32_t>(kernels::popcount_words(mask.data(), n_words));
    const auto n1 = static_cast<std::uint32_t>(
        kernels::popcount_and(mask.data(), labels.data(), n_words));
    return ClassCounts{n - n1, n1};
}

void validate_config(const TreeConfig& config, int arity) {
    if (config.max_depth < 1) throw Error("max_depth must be >= 1");
    if (config.min_samples_split < 2) throw Error("min_samples_split must be >= 2");
    if (config.min_samples_leaf < 1) throw Error("min_samples_leaf must be >= 1");
    for (int f : config.allowed_features)
        if (f < 0 || f >= arity)
            throw Error("allowed feature index " + std::to_string(f) + " out of range");
}

int select_min_impurity(std::span<const double> impurities) {
    if (impurities.empty()) throw Error("select_min_impurity on an empty list");
    int best = 0;
    for (int i = 1; i < static_cast<int>(impurities.size()); ++i)
        if (impurities[static_cast<std::size_t>(i)] < impurities[static_cast<std::size_t>(best)])
            best = i;
    return best;
}

double weighted_gini(const LabeledDataset& dataset, int feature_index) {
    if (dataset.samples.empty()) throw Error("weighted_gini of an empty dataset");
    ClassCounts left, right;
    for (const Sample& s : dataset.samples) {
        bool bit = s.features.bits[static_cast<std::size_t>(feature_index)];
        ClassCounts& side = bit ? right : left;
        if (s.label) ++side.n1;
        else ++side.n0;
    }
    const double n = static_cast<double>(dataset.size());
    double value = 0.0;
    if (left.total() > 0) value += (static_cast<double>(left.total()) / n) * gini(left);
    if (right.total() > 0) value += (static_cast<double>(right.total()) / n) * gini(right);
    return value;
}

std::optional<SplitChoice> best_split_packed(const PackedDataset& data,
                                             std::span<const std::uint64_t> mask,
                                             ClassCounts node_counts,
                                             std::span<const int> allowed_features) {
    const std::uint32_t n = node_counts.total();
    if (n < 2) return std::nullopt;
    const double node_gini = gini(node_counts);
    const double nd = static_cast<double>(n);

    std::optional<SplitChoice> best;
    std::vector<int> all;
    if (allowed_features.empty()) {
        all.resize(static_cast<std::size_t>(data.arity));
        for (int j = 0; j < data.arity; ++j) all[static_cast<std::size_t>(j)] = j;
        allowed_features = all;
    }
    for (int j : allowed_features) {
        const auto& col = data.cols[static_cast<std::size_t>(j)];
        const auto t = static_cast<std::uint32_t>(
            kernels::popcount_and(mask.data(), col.data(), data.n_words));
        const auto t1 = static_cast<std::uint32_t>(
            kernels::popcount_and3(mask.data(), col.data(), data.labels.data(), data.n_words));
        ClassCounts right{t - t1, t1};
        ClassCounts left{node_counts.n0 - right.n0, node_counts.n1 - right.n1};
        if (left.total() == 0 || right.total() == 0) continue;
        const double wg = (static_cast<double>(left.total()) / nd) * gini(left) +
                          (static_cast<double>(right.total()) / nd) * gini(right);
        if (!best || wg < best->weighted_impurity)
            best = SplitChoice{j, wg, left, right};  // ties keep the lowest index
    }
    if (best && best->weighted_impurity < node_gini) return best;
    return std::nullopt;
}

std::optional<SplitChoice> best_split(const LabeledDataset& dataset,
                                      std::span<const int> allowed_features) {
    if (dataset.size() < 2) throw Error("best_split needs at least 2 samples");
    PackedDataset packed = PackedDataset::from(dataset);
    auto mask = packed.full_mask();
    return best_split_packed(packed, mask, packed.counts_under(mask), allowed_features);
}

namespace {

struct TreeBuilder {
    const PackedDataset& data;
    const TreeConfig& config;
    const FeatureSampler& sampler;
    DecisionTree& tree;

    int build(const std::vector<std::uint64_t>& mask, ClassCounts counts, int depth) {
        const int index = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back(TreeNode{});
        TreeNode node;
        node.counts = counts;
        node.gini = gini(counts);
        node.prediction = counts.majority();

        bool pure = counts.n0 == 0 || counts.n1 == 0;
        bool can_split = !pure && depth < config.max_depth &&
                         counts.total() >= static_cast<std::uint32_t>(config.min_samples_split);
        std::optional<SplitChoice> split;
        if (can_split) {
            std::vector<int> allowed =
                sampler ? sampler(data.arity) : config.allowed_features;
            std::sort(allowed.begin(), allowed.end());
            split = best_split_packed(data, mask, counts, allowed);
            if (split &&
                (split->left.total() < static_cast<std::uint32_t>(config.min_samples_leaf) ||
                 split->right.total() < static_cast<std::uint32_t>(config.min_samples_leaf)))
                split.reset();
        }
        if (!split) {
            tree.nodes[static_cast<std::size_t>(index)] = node;
            return index;
        }

        node.leaf = false;
        node.feature = split->feature;
        const auto& col = data.cols[static_cast<std::size_t>(split->feature)];
        std::vector<std::uint64_t> left_mask(data.n_words), right_mask(data.n_words);
        for (std::size_t w = 0; w < data.n_words; ++w) {
            left_mask[w] = mask[w] & ~col[w];
            right_mask[w] = mask[w] & col[w];
        }
        node.left = build(left_mask, split->left, depth + 1);
        node.right = build(right_mask, split->right, depth + 1);
        tree.nodes[static_cast<std::size_t>(index)] = node;
        return index;
    }
};

}  // namespace

DecisionTree build_tree_packed(const PackedDataset& data, Family family,
                               const TreeConfig& config, const FeatureSampler& sampler) {
    if (data.n_samples == 0) throw Error("build_tree on an empty dataset");
    validate_config(config, data.arity);
    DecisionTree tree;
    tree.family = family;
    tree.config = config;
    auto mask = data.full_mask();
    TreeBuilder builder{data, config, sampler, tree};
    builder.build(mask, data.counts_under(mask), 1);
    return tree;
}

DecisionTree build_tree(const LabeledDataset& dataset, const TreeConfig& config,
                        const FeatureSampler& sampler) {
    if (dataset.samples.empty()) throw Error("build_tree on an empty dataset");
    PackedDataset packed = PackedDataset::from(dataset);
    return build_tree_packed(packed, dataset.family, config, sampler);
}

int count_leaves(const DecisionTree& tree, int node) {
    const TreeNode& n = tree.nodes[static_cast<std::size_t>(node)];
    if (n.leaf) return 1;
    return count_leaves(tree, n.left) + count_leaves(tree, n.right);
}

int tree_depth(const DecisionTree& tree, int node) {
    const TreeNode& n = tree.nodes[static_cast<std::size_t>(node)];
    if (n.leaf) return 1;
    return 1 + std::max(tree_depth(tree, n.left), tree_depth(tree, n.right));
}

namespace {

const TreeNode& leaf_for(const DecisionTree& tree, const FeatureVector& fv) {
    if (fv.bits.size() != static_cast<std::size_t>(family_arity(tree.family)))
        throw Error("feature vector arity " + std::to_string(fv.bits.size()) +
                    " does not match model family " + std::string(family_tag(tree.family)));
    const TreeNode* node = &tree.root();
    while (!node->leaf) {
        bool bit = fv.bits[static_cast<std::size_t>(node->feature)];
        node = &tree.nodes[static_cast<std::size_t>(bit ? node->right : node->left)];
    }
    return *node;
}

std::string format_gini(double g) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", g);
    std::string s(buf);
    while (s.size() > 3 && s.back() == '0') s.pop_back();  // keep one decimal
    return s;
}

void dot_node(const DecisionTree& tree, int index, std::string& out) {
    const TreeNode& n = tree.nodes[static_cast<std::size_t>(index)];
    out += std::to_string(index) + " [label=\"";
    if (!n.leaf) out += feature_code(tree.family, n.feature) + " <= 0.5\\n";
    out += "gini = " + format_gini(n.gini);
    out += "\\nsamples = " + std::to_string(n.counts.total());
    out += "\\nvalue = [" + std::to_string(n.counts.n0) + ", " + std::to_string(n.counts.n1) +
           "]";
    if (n.leaf) out += "\\nclass = " + std::to_string(n.prediction);
    out += "\"] ;\n";
    if (!n.leaf) {
        out += std::to_string(index) + " -> " + std::to_string(n.left) +
               " [label=\"False\"] ;\n";
        out += std::to_string(index) + " -> " + std::to_string(n.right) +
               " [label=\"True\"] ;\n";
        dot_node(tree, n.left, out);
        dot_node(tree, n.right, out);
    }
}

}  // namespace

int predict(const DecisionTree& tree, const FeatureVector& fv) {
    return leaf_for(tree, fv).prediction;
}

ClassCounts predict_counts(const DecisionTree& tree, const FeatureVector& fv) {
    return leaf_for(tree, fv).counts;
}

std::string export_dot(const DecisionTree& tree) {
    std::string out = "digraph Tree {\n";
    out += "node [shape=box] ;\n";
    dot_node(tree, 0, out);
    out += "}\n";
    return out;
}

}  // namespace nftscan
