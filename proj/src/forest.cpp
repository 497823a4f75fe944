#include "nftscan/forest.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include <json.hpp>

#include "nftscan/pruning.hpp"

namespace nftscan {

namespace {

void validate_forest_config(const ForestConfig& c, int arity) {
    if (c.n_trees < 1) throw Error("n_trees must be >= 1");
    if (c.max_features < 1 || c.max_features > arity)
        throw Error("max_features must be in [1, " + std::to_string(arity) + "], found " +
                    std::to_string(c.max_features));
    TreeConfig tc{c.max_depth, c.min_samples_split, c.min_samples_leaf, {}};
    validate_config(tc, arity);
}

LabeledDataset sorted_by_id(const LabeledDataset& dataset) {
    LabeledDataset out = dataset;
    std::sort(out.samples.begin(), out.samples.end(),
              [](const Sample& a, const Sample& b) { return a.id < b.id; });
    return out;
}

LabeledDataset materialize_bag(const LabeledDataset& data,
                               const std::vector<std::uint32_t>& bag) {
    LabeledDataset out;
    out.family = data.family;
    out.samples.reserve(bag.size());
    for (std::uint32_t r : bag) out.samples.push_back(data.samples[r]);
    return out;
}

}  // namespace

std::vector<std::uint32_t> bootstrap_sample(std::size_t n, SplitMix64& rng) {
    if (n == 0) throw Error("bootstrap_sample of an empty set");
    std::vector<std::uint32_t> bag(n);
    for (std::size_t i = 0; i < n; ++i)
        bag[i] = static_cast<std::uint32_t>(rng.below(static_cast<std::uint64_t>(n)));
    std::sort(bag.begin(), bag.end());
    return bag;
}

ForestModel train_forest(const LabeledDataset& dataset, const ForestConfig& config) {
    if (dataset.samples.empty()) throw Error("train_forest on an empty dataset");
    validate_forest_config(config, dataset.arity());

    // Bags are drawn against the sorted-by-id order, so sample order in the
    // input never affects the model.
    LabeledDataset data = sorted_by_id(dataset);
    PackedDataset packed = PackedDataset::from(data);
    const std::size_t n = data.size();
    const int arity = data.arity();

    ForestModel model;
    model.family = data.family;
    model.config = config;
    model.n_samples = n;
    model.trees.reserve(static_cast<std::size_t>(config.n_trees));
    model.bags.reserve(static_cast<std::size_t>(config.n_trees));

    std::vector<std::uint32_t> identity(n);
    for (std::size_t i = 0; i < n; ++i) identity[i] = static_cast<std::uint32_t>(i);

    for (int t = 0; t < config.n_trees; ++t) {
        SplitMix64 rng(derive_stream(config.seed, static_cast<std::uint64_t>(t)));
        std::vector<std::uint32_t> bag =
            config.bootstrap ? bootstrap_sample(n, rng) : identity;

        TreeConfig tc{config.max_depth, config.min_samples_split, config.min_samples_leaf, {}};
        FeatureSampler sampler;
        if (config.max_features < arity) {
            if (config.feature_mode == FeatureMode::per_tree) {
                auto fixed = sample_without_replacement(arity, config.max_features, rng);
                sampler = [fixed](int) { return fixed; };
            } else {
                auto rng_ptr = std::make_shared<SplitMix64>(rng);
                int k = config.max_features;
                sampler = [rng_ptr, k](int a) {
                    return sample_without_replacement(a, k, *rng_ptr);
                };
            }
        }

        PackedDataset bag_data = config.bootstrap ? packed.gather(bag) : packed;
        DecisionTree tree = build_tree_packed(bag_data, data.family, tc, sampler);

        if (config.prune_trees) {
            LabeledDataset bag_rows = materialize_bag(data, bag);
            PrunedSequence seq = prune_sequence(tree, bag_rows);
            ClassCounts root = tree.root().counts;
            // CV selection needs both classes represented a few times over
            if (root.n0 >= 5 && root.n1 >= 5)
                tree = select_by_validation(seq, 5, bag_rows,
                                            derive_stream(config.seed,
                                                          0x9000 + static_cast<std::uint64_t>(t)));
        }

        model.trees.push_back(std::move(tree));
        model.bags.push_back(std::move(bag));
    }
    return model;
}

std::pair<int, int> predict_votes(const ForestModel& model, const FeatureVector& fv) {
    int votes0 = 0, votes1 = 0;
    for (const DecisionTree& tree : model.trees)
        (predict(tree, fv) == 1 ? votes1 : votes0)++;
    return {votes0, votes1};
}

int predict_forest(const ForestModel& model, const FeatureVector& fv) {
    auto [v0, v1] = predict_votes(model, fv);
    return v1 > v0 ? 1 : 0;  // exact tie -> 0
}

double oob_score(const ForestModel& model, const LabeledDataset& dataset) {
    if (!model.config.bootstrap)
        throw Error("oob_score requires a bootstrap-trained model");
    LabeledDataset data = sorted_by_id(dataset);
    if (data.size() != model.n_samples)
        throw Error("oob_score dataset size " + std::to_string(data.size()) +
                    " does not match the model's training size " +
                    std::to_string(model.n_samples));

    std::vector<std::set<std::uint32_t>> in_bag;
    in_bag.reserve(model.bags.size());
    for (const auto& bag : model.bags) in_bag.emplace_back(bag.begin(), bag.end());

    std::size_t scored = 0, correct = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        int votes0 = 0, votes1 = 0;
        for (std::size_t t = 0; t < model.trees.size(); ++t) {
            if (in_bag[t].count(static_cast<std::uint32_t>(i))) continue;
            (predict(model.trees[t], data.samples[i].features) == 1 ? votes1 : votes0)++;
        }
        if (votes0 + votes1 == 0) continue;
        ++scored;
        int label = votes1 > votes0 ? 1 : 0;
        if (label == data.samples[i].label) ++correct;
    }
    if (scored == 0) throw Error("no sample is out of bag for any tree");
    return static_cast<double>(correct) / static_cast<double>(scored);
}

// --- serialization ----------------------------------------------------------

namespace {

using json = nlohmann::ordered_json;

json tree_to_json(const DecisionTree& tree) {
    json nodes = json::array();
    for (const TreeNode& n : tree.nodes) {
        json j;
        j["leaf"] = n.leaf;
        if (!n.leaf) {
            j["feature"] = n.feature;
            j["left"] = n.left;
            j["right"] = n.right;
        }
        j["gini"] = n.gini;
        j["counts"] = {n.counts.n0, n.counts.n1};
        j["prediction"] = n.prediction;
        nodes.push_back(std::move(j));
    }
    json t;
    t["max_depth"] = tree.config.max_depth;
    t["nodes"] = std::move(nodes);
    return t;
}

DecisionTree tree_from_json(const json& t, Family family, const ForestConfig& config) {
    DecisionTree tree;
    tree.family = family;
    tree.config = TreeConfig{t.at("max_depth").get<int>(), config.min_samples_split,
                             config.min_samples_leaf, {}};
    const int arity = family_arity(family);
    const auto& nodes = t.at("nodes");
    for (const auto& j : nodes) {
        TreeNode n;
        n.leaf = j.at("leaf").get<bool>();
        n.gini = j.at("gini").get<double>();
        n.counts.n0 = j.at("counts").at(0).get<std::uint32_t>();
        n.counts.n1 = j.at("counts").at(1).get<std::uint32_t>();
        n.prediction = j.at("prediction").get<int>();
        if (!n.leaf) {
            n.feature = j.at("feature").get<int>();
            n.left = j.at("left").get<std::int32_t>();
            n.right = j.at("right").get<std::int32_t>();
            if (n.feature < 0 || n.feature >= arity)
                throw Error("model tree splits on feature " + std::to_string(n.feature) +
                            ", outside the " + std::string(family_tag(family)) + " arity " +
                            std::to_string(arity));
            if (n.left < 0 || n.right < 0)
                throw Error("model tree has dangling child indices");
        }
        tree.nodes.push_back(n);
    }
    if (tree.nodes.empty()) throw Error("model tree has no nodes");
    for (const TreeNode& n : tree.nodes) {
        if (!n.leaf && (n.left >= static_cast<std::int32_t>(tree.nodes.size()) ||
                        n.right >= static_cast<std::int32_t>(tree.nodes.size())))
            throw Error("model tree has out-of-range child indices");
    }
    return tree;
}

}  // namespace

std::string serialize_model(const ForestModel& model) {
    json j;
    j["format"] = "nftscan-forest";
    j["format_version"] = model_format_version;
    j["family"] = family_tag(model.family);
    json cfg;
    cfg["n_trees"] = model.config.n_trees;
    cfg["max_features"] = model.config.max_features;
    cfg["max_depth"] = model.config.max_depth;
    cfg["min_samples_split"] = model.config.min_samples_split;
    cfg["min_samples_leaf"] = model.config.min_samples_leaf;
    cfg["bootstrap"] = model.config.bootstrap;
    cfg["prune_trees"] = model.config.prune_trees;
    cfg["feature_mode"] =
        model.config.feature_mode == FeatureMode::per_split ? "per_split" : "per_tree";
    cfg["rng"] = model_rng_id;
    cfg["seed"] = model.config.seed;
    j["config"] = std::move(cfg);
    j["n_samples"] = model.n_samples;
    json trees = json::array();
    for (const DecisionTree& t : model.trees) trees.push_back(tree_to_json(t));
    j["trees"] = std::move(trees);
    j["bags"] = model.bags;
    return j.dump(1) + "\n";
}

ForestModel deserialize_model(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw Error(std::string("model file is not valid JSON: ") + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != "nftscan-forest")
            throw Error("not an nftscan-forest model file");
        int version = j.at("format_version").get<int>();
        if (version != model_format_version)
            throw Error("unsupported model format version " + std::to_string(version) +
                        " (this build reads version " + std::to_string(model_format_version) +
                        ")");
        ForestModel model;
        model.family = parse_family(j.at("family").get<std::string>());
        const auto& cfg = j.at("config");
        if (cfg.at("rng").get<std::string>() != model_rng_id)
            throw Error("unsupported rng '" + cfg.at("rng").get<std::string>() +
                        "' (this build implements " + std::string(model_rng_id) + ")");
        model.config.n_trees = cfg.at("n_trees").get<int>();
        model.config.max_features = cfg.at("max_features").get<int>();
        model.config.max_depth = cfg.at("max_depth").get<int>();
        model.config.min_samples_split = cfg.at("min_samples_split").get<int>();
        model.config.min_samples_leaf = cfg.at("min_samples_leaf").get<int>();
        model.config.bootstrap = cfg.at("bootstrap").get<bool>();
        model.config.prune_trees = cfg.at("prune_trees").get<bool>();
        std::string mode = cfg.at("feature_mode").get<std::string>();
        if (mode == "per_split") model.config.feature_mode = FeatureMode::per_split;
        else if (mode == "per_tree") model.config.feature_mode = FeatureMode::per_tree;
        else throw Error("unknown feature_mode '" + mode + "'");
        model.config.seed = cfg.at("seed").get<std::uint64_t>();
        model.n_samples = j.at("n_samples").get<std::size_t>();

        for (const auto& t : j.at("trees"))
            model.trees.push_back(tree_from_json(t, model.family, model.config));
        model.bags = j.at("bags").get<std::vector<std::vector<std::uint32_t>>>();

        if (model.trees.size() != static_cast<std::size_t>(model.config.n_trees))
            throw Error("model holds " + std::to_string(model.trees.size()) +
                        " trees but config says " + std::to_string(model.config.n_trees));
        if (model.bags.size() != model.trees.size())
            throw Error("model holds " + std::to_string(model.bags.size()) + " bags for " +
                        std::to_string(model.trees.size()) + " trees");
        for (const auto& bag : model.bags) {
            if (bag.size() != model.n_samples)
                throw Error("bag cardinality " + std::to_string(bag.size()) +
                            " does not match training size " + std::to_string(model.n_samples));
            for (std::uint32_t r : bag)
                if (r >= model.n_samples) throw Error("bag index out of range");
        }
        return model;
    } catch (const json::exception& e) {
        throw Error(std::string("malformed model file: ") + e.what());
    }
}

void save_model(const ForestModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write model file: " + path.string());
    out << serialize_model(model);
    if (!out) throw Error("error while writing model file: " + path.string());
}

ForestModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read model file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize_model(buf.str());
}

}  // namespace nftscan
