#include "nftscan/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "nftscan/corpus.hpp"
#include "nftscan/rng.hpp"

namespace nftscan {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    cells.push_back(cur);
    return cells;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;  // (line number, cells)
};

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read CSV file: " + path.string());
    CsvTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto cells = split_csv_line(line);
        if (lineno == 1)
            table.header = std::move(cells);
        else
            table.rows.emplace_back(lineno, std::move(cells));
    }
    if (table.header.empty()) throw Error("empty CSV file: " + path.string());
    return table;
}

// Validates `File,<codes...>,Risk` and returns the number of feature columns.
int check_header(const std::vector<std::string>& header, Family family, bool allow_label_only,
                 const std::filesystem::path& path) {
    const int arity = family_arity(family);
    auto fail = [&](const std::string& why) {
        throw Error(path.string() + ": header/family arity mismatch for " +
                    std::string(family_tag(family)) + ": " + why);
    };
    if (header.size() < 2 || header.front() != "File" || header.back() != "Risk")
        fail("expected File,...,Risk");
    int n_codes = static_cast<int>(header.size()) - 2;
    if (n_codes == 0) {
        if (!allow_label_only) fail("expected " + std::to_string(arity) + " feature columns");
        return 0;
    }
    if (n_codes != arity)
        fail("expected " + std::to_string(arity) + " feature columns, found " +
             std::to_string(n_codes));
    for (int i = 0; i < arity; ++i) {
        if (header[static_cast<std::size_t>(i) + 1] != feature_code(family, i))
            fail("column " + std::to_string(i + 2) + " is '" +
                 header[static_cast<std::size_t>(i) + 1] + "', expected '" +
                 feature_code(family, i) + "'");
    }
    return arity;
}

int parse_label_cell(const std::string& cell, std::size_t lineno,
                     const std::filesystem::path& path) {
    if (cell == "0") return 0;
    if (cell == "1") return 1;
    throw Error(path.string() + ":" + std::to_string(lineno) + ": Risk must be 0 or 1, found '" +
                cell + "'");
}

bool parse_bool_cell(const std::string& cell, std::size_t lineno,
                     const std::filesystem::path& path) {
    if (cell == "False") return false;
    if (cell == "True") return true;
    throw Error(path.string() + ":" + std::to_string(lineno) +
                ": feature cell must be False or True, found '" + cell + "'");
}

}  // namespace

LabelTable read_labels(const std::filesystem::path& csv_path, Family family) {
    CsvTable table = read_csv(csv_path);
    int n_features = check_header(table.header, family, /*allow_label_only=*/true, csv_path);
    LabelTable labels;
    labels.family = family;
    for (const auto& [lineno, cells] : table.rows) {
        if (cells.size() != table.header.size())
            throw Error(csv_path.string() + ":" + std::to_string(lineno) +
                        ": expected " + std::to_string(table.header.size()) + " cells, found " +
                        std::to_string(cells.size()));
        for (int i = 0; i < n_features; ++i)
            parse_bool_cell(cells[static_cast<std::size_t>(i) + 1], lineno, csv_path);
        std::string id = source_id_from_name(cells.front());
        int label = parse_label_cell(cells.back(), lineno, csv_path);
        auto [it, inserted] = labels.entries.emplace(std::move(id), label);
        if (!inserted)
            throw Error(csv_path.string() + ":" + std::to_string(lineno) +
                        ": duplicate id '" + it->first + "'");
    }
    return labels;
}

void write_feature_csv(const LabeledDataset& dataset, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write CSV file: " + path.string());
    out << "File";
    for (int i = 0; i < dataset.arity(); ++i) out << ',' << feature_code(dataset.family, i);
    out << ",Risk\n";
    for (const Sample& s : dataset.samples) {
        out << s.id << ".sol";
        for (bool bit : s.features.bits) out << ',' << (bit ? "True" : "False");
        out << ',' << s.label << '\n';
    }
    if (!out) throw Error("error while writing CSV file: " + path.string());
}

LabeledDataset read_feature_csv(const std::filesystem::path& path, Family family) {
    CsvTable table = read_csv(path);
    check_header(table.header, family, /*allow_label_only=*/false, path);
    LabeledDataset ds;
    ds.family = family;
    const int arity = family_arity(family);
    for (const auto& [lineno, cells] : table.rows) {
        if (cells.size() != table.header.size())
            throw Error(path.string() + ":" + std::to_string(lineno) + ": expected " +
                        std::to_string(table.header.size()) + " cells, found " +
                        std::to_string(cells.size()));
        Sample s;
        s.id = source_id_from_name(cells.front());
        s.features.family = family;
        s.features.bits.resize(static_cast<std::size_t>(arity));
        for (int i = 0; i < arity; ++i)
            s.features.bits[static_cast<std::size_t>(i)] =
                parse_bool_cell(cells[static_cast<std::size_t>(i) + 1], lineno, path);
        s.label = parse_label_cell(cells.back(), lineno, path);
        ds.samples.push_back(std::move(s));
    }
    std::set<std::string> ids;
    for (const Sample& s : ds.samples)
        if (!ids.insert(s.id).second)
            throw Error(path.string() + ": duplicate id '" + s.id + "'");
    return ds;
}

Family feature_csv_family(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read CSV file: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw Error("empty CSV file: " + path.string());
    auto cells = split_csv_line(line);
    if (cells.size() < 3) throw Error(path.string() + ": header has no feature columns");
    auto [family, index] = parse_feature_code(cells[1]);
    (void)index;
    return family;
}

std::pair<LabeledDataset, LabeledDataset> split_dataset(const LabeledDataset& dataset,
                                                        double test_fraction,
                                                        std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw Error("test_fraction must be in (0, 1)");
    if (dataset.samples.empty()) throw Error("cannot split an empty dataset");

    std::vector<std::size_t> by_class[2];
    for (std::size_t i = 0; i < dataset.samples.size(); ++i)
        by_class[dataset.samples[i].label].push_back(i);

    std::vector<char> in_test(dataset.samples.size(), 0);
    for (int cls = 0; cls < 2; ++cls) {
        auto& idx = by_class[cls];
        if (idx.empty()) continue;
        if (idx.size() < 2)
            throw Error("cannot stratify: class " + std::to_string(cls) +
                        " has fewer than 2 samples");
        auto take = static_cast<std::size_t>(
            std::llround(static_cast<double>(idx.size()) * test_fraction));
        SplitMix64 rng(derive_stream(seed, static_cast<std::uint64_t>(cls)));
        shuffle_in_place(idx, rng);
        for (std::size_t k = 0; k < take && k < idx.size(); ++k) in_test[idx[k]] = 1;
    }

    LabeledDataset train, test;
    train.family = test.family = dataset.family;
    for (std::size_t i = 0; i < dataset.samples.size(); ++i)
        (in_test[i] ? test : train).samples.push_back(dataset.samples[i]);
    return {std::move(train), std::move(test)};
}

std::vector<int> stratified_folds(const LabeledDataset& dataset, int folds, std::uint64_t seed) {
    if (folds < 2) throw Error("folds must be >= 2");
    std::vector<std::size_t> by_class[2];
    for (std::size_t i = 0; i < dataset.samples.size(); ++i)
        by_class[dataset.samples[i].label].push_back(i);
    for (int cls = 0; cls < 2; ++cls) {
        if (!by_class[cls].empty() && by_class[cls].size() < static_cast<std::size_t>(folds))
            throw Error("cannot build " + std::to_string(folds) + " stratified folds: class " +
                        std::to_string(cls) + " has only " +
                        std::to_string(by_class[cls].size()) + " samples");
    }
    std::vector<int> fold_of(dataset.samples.size(), 0);
    for (int cls = 0; cls < 2; ++cls) {
        auto& idx = by_class[cls];
        SplitMix64 rng(derive_stream(seed, 0x10 + static_cast<std::uint64_t>(cls)));
        shuffle_in_place(idx, rng);
        for (std::size_t k = 0; k < idx.size(); ++k)
            fold_of[idx[k]] = static_cast<int>(k % static_cast<std::size_t>(folds));
    }
    return fold_of;
}

LabeledDataset subset_by_fold(const LabeledDataset& dataset, const std::vector<int>& fold_of,
                              int fold, bool keep_fold) {
    LabeledDataset out;
    out.family = dataset.family;
    for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
        if ((fold_of[i] == fold) == keep_fold) out.samples.push_back(dataset.samples[i]);
    }
    return out;
}

}  // namespace nftscan
