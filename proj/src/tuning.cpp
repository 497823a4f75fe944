#include "nftscan/tuning.hpp"

#include <charconv>
#include <fstream>

#include "nftscan/dataset.hpp"
#include "nftscan/report.hpp"

namespace nftscan {

namespace {

std::string shortest_double(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, end);
}

}  // namespace

GridSpec default_grid(Family family, int folds, std::uint64_t seed) {
    GridSpec g;
    for (int f = 2; f <= family_arity(family); ++f) g.max_features_values.push_back(f);
    g.n_trees_values = {25, 50, 55, 75, 100};
    for (int d = 2; d <= 10; ++d) g.max_depth_values.push_back(d);
    g.folds = folds;
    g.seed = seed;
    return g;
}

std::uint64_t cell_seed(std::uint64_t grid_seed, int max_features, int n_trees, int max_depth,
                        int fold) {
    std::uint64_t s = grid_seed;
    for (std::uint64_t v : {std::uint64_t{0x6E5F}, static_cast<std::uint64_t>(max_features),
                            static_cast<std::uint64_t>(n_trees),
                            static_cast<std::uint64_t>(max_depth),
                            static_cast<std::uint64_t>(fold)})
        s = derive_stream(s, v);
    return s;
}

GridSearchResult grid_search(const LabeledDataset& dataset, const GridSpec& grid) {
    if (grid.max_features_values.empty() || grid.n_trees_values.empty() ||
        grid.max_depth_values.empty())
        throw Error("grid axes must be nonempty");
    auto fold_of = stratified_folds(dataset, grid.folds, grid.seed);

    std::vector<LabeledDataset> train_parts, held_parts;
    for (int fold = 0; fold < grid.folds; ++fold) {
        train_parts.push_back(subset_by_fold(dataset, fold_of, fold, false));
        held_parts.push_back(subset_by_fold(dataset, fold_of, fold, true));
    }

    GridSearchResult result;
    for (int mf : grid.max_features_values) {
        for (int nt : grid.n_trees_values) {
            for (int md : grid.max_depth_values) {
                GridCell cell;
                cell.max_features = mf;
                cell.n_trees = nt;
                cell.max_depth = md;
                for (int fold = 0; fold < grid.folds; ++fold) {
                    ForestConfig cfg;
                    cfg.n_trees = nt;
                    cfg.max_features = mf;
                    cfg.max_depth = md;
                    cfg.seed = cell_seed(grid.seed, mf, nt, md, fold);
                    ForestModel model = train_forest(train_parts[static_cast<std::size_t>(fold)],
                                                     cfg);
                    Confusion conf;
                    for (const Sample& s :
                         held_parts[static_cast<std::size_t>(fold)].samples)
                        conf.add(s.label, predict_forest(model, s.features));
                    Metrics m = metrics(conf);
                    cell.fold_accuracies.push_back(m.accuracy);
                    cell.mean_precision += m.precision;
                    cell.mean_recall += m.recall;
                }
                double sum = 0.0;
                for (double a : cell.fold_accuracies) sum += a;
                cell.mean_accuracy = sum / static_cast<double>(grid.folds);
                cell.mean_precision /= static_cast<double>(grid.folds);
                cell.mean_recall /= static_cast<double>(grid.folds);
                result.cells.push_back(std::move(cell));
            }
        }
    }

    auto better = [](const GridCell& a, const GridCell& b) {
        if (a.mean_accuracy != b.mean_accuracy) return a.mean_accuracy > b.mean_accuracy;
        if (a.n_trees != b.n_trees) return a.n_trees < b.n_trees;
        if (a.max_depth != b.max_depth) return a.max_depth < b.max_depth;
        return a.max_features < b.max_features;
    };
    for (std::size_t i = 1; i < result.cells.size(); ++i)
        if (better(result.cells[i], result.cells[result.best_index])) result.best_index = i;
    return result;
}

FamilyPreset builtin_preset(Family family) {
    switch (family) {
    case Family::rmp: return {3, 50, 4};
    case Family::erc721r: return {4, 50, 5};
    case Family::um: return {4, 75, 4};
    case Family::mr: return {4, 50, 4};
    case Family::pb: return {5, 55, 3};
    }
    throw Error("unknown family");
}

std::vector<std::pair<Family, FamilyPreset>> builtin_presets() {
    std::vector<std::pair<Family, FamilyPreset>> out;
    for (Family f : all_families) out.emplace_back(f, builtin_preset(f));
    return out;
}

ForestConfig preset_config(Family family, std::uint64_t seed) {
    FamilyPreset p = builtin_preset(family);
    ForestConfig cfg;
    cfg.n_trees = p.n_trees;
    cfg.max_features = p.max_features;
    cfg.max_depth = p.max_depth;
    cfg.seed = seed;
    return cfg;
}

std::string surface_csv(const GridSearchResult& result) {
    std::string out = "max_features,n_trees,max_depth,mean_cv_accuracy,fold_accuracies\n";
    for (const GridCell& c : result.cells) {
        out += std::to_string(c.max_features) + ',' + std::to_string(c.n_trees) + ',' +
               std::to_string(c.max_depth) + ',' + shortest_double(c.mean_accuracy) + ',';
        for (std::size_t i = 0; i < c.fold_accuracies.size(); ++i) {
            if (i) out += ';';
            out += shortest_double(c.fold_accuracies[i]);
        }
        out += '\n';
    }
    return out;
}

void export_surface(const GridSearchResult& result, const std::filesystem::path& path) {
    if (result.cells.empty()) throw Error("cannot export an empty grid-search result");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write surface CSV: " + path.string());
    out << surface_csv(result);
    if (!out) throw Error("error while writing surface CSV: " + path.string());
}

}  // namespace nftscan
