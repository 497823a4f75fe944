#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>

#include <CLI11.hpp>

#include "nftscan/corpus.hpp"
#include "nftscan/dataset.hpp"
#include "nftscan/features.hpp"
#include "nftscan/forest.hpp"
#include "nftscan/pruning.hpp"
#include "nftscan/report.hpp"
#include "nftscan/rules.hpp"
#include "nftscan/synth.hpp"
#include "nftscan/tuning.hpp"

namespace {

using namespace nftscan;

RuleSet rules_from_option(const std::string& rules_path) {
    return rules_path.empty() ? builtin_rules() : load_rules(rules_path);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("error while writing " + path.string());
}

std::vector<int> parse_int_list(const std::string& spec, const std::string& axis) {
    std::vector<int> values;
    std::string token;
    auto flush = [&]() {
        if (token.empty()) return;
        std::size_t dots = token.find("..");
        if (dots != std::string::npos) {
            int lo = std::stoi(token.substr(0, dots));
            int hi = std::stoi(token.substr(dots + 2));
            for (int v = lo; v <= hi; ++v) values.push_back(v);
        } else {
            values.push_back(std::stoi(token));
        }
        token.clear();
    };
    for (char ch : spec) {
        if (ch == ',') flush();
        else token.push_back(ch);
    }
    flush();
    if (values.empty()) throw Error("grid axis '" + axis + "' has no values");
    return values;
}

// mf=2,3;trees=25,50;depth=2..6
GridSpec parse_grid(const std::string& spec, Family family, int folds, std::uint64_t seed) {
    GridSpec grid = default_grid(family, folds, seed);
    if (spec.empty()) return grid;
    std::string part;
    auto apply = [&]() {
        if (part.empty()) return;
        std::size_t eq = part.find('=');
        if (eq == std::string::npos)
            throw Error("grid part '" + part + "' is not <axis>=<values>");
        std::string axis = part.substr(0, eq);
        std::string values = part.substr(eq + 1);
        if (axis == "mf") grid.max_features_values = parse_int_list(values, axis);
        else if (axis == "trees") grid.n_trees_values = parse_int_list(values, axis);
        else if (axis == "depth") grid.max_depth_values = parse_int_list(values, axis);
        else throw Error("unknown grid axis '" + axis + "' (use mf, trees, depth)");
        part.clear();
    };
    for (char ch : spec) {
        if (ch == ';') apply();
        else part.push_back(ch);
    }
    apply();
    return grid;
}

int cmd_ingest(const std::string& dir, const std::string& format) {
    auto sources = load_corpus(dir);
    if (format == "json") {
        std::string out = "[\n";
        for (std::size_t i = 0; i < sources.size(); ++i) {
            const auto& s = sources[i];
            auto scan = extract_functions(s.normalized_text);
            out += " {\"id\": \"" + s.id + "\", \"lines\": " +
                   std::to_string(line_count(s.raw_text)) +
                   ", \"functions\": " + std::to_string(scan.functions.size()) + "}";
            out += (i + 1 < sources.size()) ? ",\n" : "\n";
        }
        out += "]\n";
        std::fputs(out.c_str(), stdout);
    } else {
        std::printf("%zu contract(s)\n", sources.size());
        for (const auto& s : sources) {
            auto scan = extract_functions(s.normalized_text);
            std::printf("%-32s %5zu lines %3zu function(s)\n", s.id.c_str(),
                        line_count(s.raw_text), scan.functions.size());
            for (const auto& d : scan.diagnostics)
                std::printf("  warning: %s\n", d.c_str());
        }
    }
    return 0;
}

int cmd_extract(const std::string& dir, const std::string& family_tag_str,
                const std::string& labels_path, const std::string& out_path,
                const std::string& rules_path) {
    Family family = parse_family(family_tag_str);
    RuleSet ruleset = rules_from_option(rules_path);
    auto sources = load_corpus(dir);
    LabelTable labels = read_labels(labels_path, family);
    LabeledDataset ds = build_dataset(sources, labels, family, ruleset);
    write_feature_csv(ds, out_path);
    std::printf("wrote %zu samples to %s\n", ds.size(), out_path.c_str());
    return 0;
}

int cmd_train(const std::string& csv, const std::string& preset_tag, int max_features,
              int n_trees, int max_depth, int min_split, int min_leaf, bool no_bootstrap,
              bool prune_trees, const std::string& feature_mode, std::uint64_t seed,
              const std::string& out_path) {
    Family family = feature_csv_family(csv);
    LabeledDataset ds = read_feature_csv(csv, family);

    ForestConfig cfg;
    if (!preset_tag.empty()) {
        Family preset_family = parse_family(preset_tag);
        if (preset_family != family)
            throw Error("preset family " + std::string(family_tag(preset_family)) +
                        " does not match the dataset family " +
                        std::string(family_tag(family)));
        cfg = preset_config(family, seed);
    } else {
        if (max_features <= 0 || n_trees <= 0 || max_depth <= 0)
            throw Error("either --preset or all of --max-features/--n-trees/--max-depth "
                        "are required");
        cfg.max_features = max_features;
        cfg.n_trees = n_trees;
        cfg.max_depth = max_depth;
        cfg.seed = seed;
    }
    cfg.min_samples_split = min_split;
    cfg.min_samples_leaf = min_leaf;
    cfg.bootstrap = !no_bootstrap;
    cfg.prune_trees = prune_trees;
    if (feature_mode == "per_tree") cfg.feature_mode = FeatureMode::per_tree;
    else if (feature_mode == "per_split") cfg.feature_mode = FeatureMode::per_split;
    else throw Error("--feature-mode must be per_split or per_tree");

    ForestModel model = train_forest(ds, cfg);
    std::string out = out_path;
    if (out.empty()) {
        std::string tag(family_tag(family));
        std::transform(tag.begin(), tag.end(), tag.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        out = "model_" + tag + ".json";
    }
    save_model(model, out);
    double oob = -1.0;
    if (cfg.bootstrap) oob = oob_score(model, ds);
    std::printf("trained %s forest: %d trees, max_features %d, max_depth %d -> %s\n",
                std::string(family_tag(family)).c_str(), cfg.n_trees, cfg.max_features,
                cfg.max_depth, out.c_str());
    if (oob >= 0.0) std::printf("oob accuracy %.4f\n", oob);
    return 0;
}

int cmd_prune(const std::string& csv, int folds, std::uint64_t seed,
              const std::string& out_path, const std::string& dot_path) {
    Family family = feature_csv_family(csv);
    LabeledDataset ds = read_feature_csv(csv, family);

    TreeConfig tc;
    tc.max_depth = 64;
    tc.min_samples_split = 2;
    tc.min_samples_leaf = 1;
    DecisionTree full = build_tree(ds, tc);
    PrunedSequence seq = prune_sequence(full, ds);

    std::printf("%-4s %-14s %7s %7s %12s\n", "k", "alpha", "leaves", "depth", "train_error");
    for (std::size_t k = 0; k < seq.entries.size(); ++k) {
        const auto& e = seq.entries[k];
        std::printf("%-4zu %-14.8f %7d %7d %12.6f\n", k, e.alpha, count_leaves(e.tree),
                    tree_depth(e.tree), subtree_error(e.tree, ds));
    }

    DecisionTree selected = select_by_validation(seq, folds, ds, seed);
    std::printf("selected tree: %d leaves, depth %d\n", count_leaves(selected),
                tree_depth(selected));

    if (!out_path.empty()) {
        ForestModel single;
        single.family = family;
        single.config.n_trees = 1;
        single.config.max_features = family_arity(family);
        single.config.max_depth = tc.max_depth;
        single.config.min_samples_split = tc.min_samples_split;
        single.config.min_samples_leaf = tc.min_samples_leaf;
        single.config.bootstrap = false;
        single.config.seed = seed;
        single.n_samples = ds.size();
        single.trees.push_back(selected);
        std::vector<std::uint32_t> identity(ds.size());
        for (std::size_t i = 0; i < identity.size(); ++i)
            identity[i] = static_cast<std::uint32_t>(i);
        single.bags.push_back(std::move(identity));
        save_model(single, out_path);
        std::printf("wrote selected tree to %s\n", out_path.c_str());
    }
    if (!dot_path.empty()) {
        write_text_file(dot_path, export_dot(selected));
        std::printf("wrote DOT to %s\n", dot_path.c_str());
    }
    return 0;
}

int cmd_tune(const std::string& csv, const std::string& grid_spec, int folds,
             std::uint64_t seed, const std::string& out_path) {
    Family family = feature_csv_family(csv);
    LabeledDataset ds = read_feature_csv(csv, family);
    GridSpec grid = parse_grid(grid_spec, family, folds, seed);
    GridSearchResult result = grid_search(ds, grid);
    export_surface(result, out_path);
    const GridCell& best = result.best();
    std::printf("%zu cells -> %s\n", result.cells.size(), out_path.c_str());
    std::printf("best: max_features %d, n_trees %d, max_depth %d (mean accuracy %.4f, "
                "precision %.4f, recall %.4f)\n",
                best.max_features, best.n_trees, best.max_depth, best.mean_accuracy,
                best.mean_precision, best.mean_recall);
    return 0;
}

int cmd_predict(const std::string& model_path, const std::string& dir,
                const std::string& rules_path, const std::string& format,
                const std::string& out_path) {
    ForestModel model = load_model(model_path);
    RuleSet ruleset = rules_from_option(rules_path);
    auto sources = load_corpus(dir);
    std::map<Family, ForestModel> models;
    models.emplace(model.family, std::move(model));
    ScanReport report = scan(sources, models, ruleset);
    std::string text = format == "json" ? render_json(report) : render_text(report);
    if (out_path.empty()) std::fputs(text.c_str(), stdout);
    else write_text_file(out_path, text);
    return 0;
}

int cmd_export_dot(const std::string& model_path, int tree_index,
                   const std::string& out_path) {
    ForestModel model = load_model(model_path);
    if (tree_index < 0 || tree_index >= static_cast<int>(model.trees.size()))
        throw Error("tree index " + std::to_string(tree_index) + " out of range [0, " +
                    std::to_string(model.trees.size()) + ")");
    std::string dot = export_dot(model.trees[static_cast<std::size_t>(tree_index)]);
    if (out_path.empty()) std::fputs(dot.c_str(), stdout);
    else write_text_file(out_path, dot);
    return 0;
}

int cmd_gen_corpus(const std::string& family_tag_str, int n, std::uint64_t seed,
                   const std::string& out_dir) {
    Family family = parse_family(family_tag_str);
    auto contracts = generate_family_corpus(family, n, seed);
    write_corpus(contracts, out_dir);
    int planted = 0;
    for (const auto& g : contracts) planted += g.label;
    std::printf("wrote %d contracts (%d planted) and labels.csv to %s\n", n, planted,
                out_dir.c_str());
    return 0;
}

int cmd_dump_rules(const std::string& out_path) {
    if (out_path.empty()) {
        std::filesystem::path tmp =
            std::filesystem::temp_directory_path() / "nftscan-rules-dump.rules";
        save_rules(builtin_rules(), tmp);
        std::ifstream in(tmp, std::ios::binary);
        std::string line;
        while (std::getline(in, line)) std::printf("%s\n", line.c_str());
        std::filesystem::remove(tmp);
    } else {
        save_rules(builtin_rules(), out_path);
        std::printf("wrote builtin rules to %s\n", out_path.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"NFT smart-contract vulnerability scanner: boolean static features "
                 "classified by CART / cost-complexity pruning / bagged random forests"};
    app.require_subcommand(1);

    std::string dir, csv, labels_path, out_path, rules_path, family_str, preset, grid_spec,
        model_path, dot_path, feature_mode = "per_split", format = "text";
    std::uint64_t seed = 0;
    int folds = 5, n = 200, tree_index = 0;
    int max_features = 0, n_trees = 0, max_depth = 0, min_split = 2, min_leaf = 2;
    bool no_bootstrap = false, prune_trees = false;

    auto* ingest = app.add_subcommand("ingest", "Normalize a directory of .sol files and list them");
    ingest->add_option("dir", dir, "directory of .sol files")->required();
    ingest->add_option("--format", format, "text|json");

    auto* extract = app.add_subcommand("extract", "Extract feature vectors to a CSV");
    extract->add_option("dir", dir)->required();
    extract->add_option("--family", family_str, "RMP|ERC721R|UM|MR|PB")->required();
    extract->add_option("--labels", labels_path, "labels CSV (File,Risk)")->required();
    extract->add_option("--out", out_path, "output feature CSV")->required();
    extract->add_option("--rules", rules_path, "rule file (default: builtin)");

    auto* train = app.add_subcommand("train", "Train a random forest from a feature CSV");
    train->add_option("csv", csv)->required();
    train->add_option("--preset", preset, "use the tuned settings for this family");
    train->add_option("--max-features", max_features);
    train->add_option("--n-trees", n_trees);
    train->add_option("--max-depth", max_depth);
    train->add_option("--min-split", min_split);
    train->add_option("--min-leaf", min_leaf);
    train->add_flag("--no-bootstrap", no_bootstrap, "train every tree on the full set");
    train->add_flag("--prune-trees", prune_trees, "cost-complexity prune each tree");
    train->add_option("--feature-mode", feature_mode, "per_split|per_tree");
    train->add_option("--seed", seed);
    train->add_option("--out", out_path, "model file (default model_<family>.json)");

    auto* prune = app.add_subcommand("prune",
                                     "Grow a single tree, print its alpha sequence, select by CV");
    prune->add_option("csv", csv)->required();
    prune->add_option("--folds", folds);
    prune->add_option("--seed", seed);
    prune->add_option("--out", out_path, "write the selected tree as a 1-tree model");
    prune->add_option("--dot", dot_path, "write the selected tree as DOT");

    auto* tune = app.add_subcommand("tune", "Exhaustive grid search with stratified CV");
    tune->add_option("csv", csv)->required();
    tune->add_option("--grid", grid_spec, "mf=2,3;trees=25..100;depth=2..10 (default: full)");
    tune->add_option("--folds", folds);
    tune->add_option("--seed", seed);
    tune->add_option("--out", out_path, "surface CSV")->required();

    auto* predict_cmd = app.add_subcommand("predict", "Scan a directory with a trained model");
    predict_cmd->add_option("model", model_path)->required();
    predict_cmd->add_option("dir", dir)->required();
    predict_cmd->add_option("--rules", rules_path);
    predict_cmd->add_option("--format", format, "text|json");
    predict_cmd->add_option("--out", out_path, "write the report here instead of stdout");

    auto* export_dot_cmd = app.add_subcommand("export-dot", "Print one tree of a model as DOT");
    export_dot_cmd->add_option("model", model_path)->required();
    export_dot_cmd->add_option("--tree", tree_index, "tree index (default 0)");
    export_dot_cmd->add_option("--out", out_path);

    auto* gen = app.add_subcommand("gen-corpus", "Generate a labeled synthetic corpus");
    gen->add_option("--family", family_str, "RMP|ERC721R|UM|MR|PB")->required();
    gen->add_option("--n", n, "number of contracts (default 200)");
    gen->add_option("--seed", seed);
    gen->add_option("--out", dir, "output directory")->required();

    auto* dump = app.add_subcommand("dump-rules", "Write the builtin rule file");
    dump->add_option("--out", out_path, "target path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 1;
    }

    try {
        if (app.got_subcommand(ingest)) return cmd_ingest(dir, format);
        if (app.got_subcommand(extract))
            return cmd_extract(dir, family_str, labels_path, out_path, rules_path);
        if (app.got_subcommand(train))
            return cmd_train(csv, preset, max_features, n_trees, max_depth, min_split,
                             min_leaf, no_bootstrap, prune_trees, feature_mode, seed, out_path);
        if (app.got_subcommand(prune)) return cmd_prune(csv, folds, seed, out_path, dot_path);
        if (app.got_subcommand(tune)) return cmd_tune(csv, grid_spec, folds, seed, out_path);
        if (app.got_subcommand(predict_cmd))
            return cmd_predict(model_path, dir, rules_path, format, out_path);
        if (app.got_subcommand(export_dot_cmd))
            return cmd_export_dot(model_path, tree_index, out_path);
        if (app.got_subcommand(gen)) return cmd_gen_corpus(family_str, n, seed, dir);
        if (app.got_subcommand(dump)) return cmd_dump_rules(out_path);
    } catch (const nftscan::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 1;
}
