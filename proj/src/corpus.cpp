#include "nftscan/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace nftscan {

namespace {

bool is_kept_ascii(unsigned char c) {
    return c == '\n' || c == '\t' || (c >= 0x20 && c <= 0x7E);
}

}  // namespace

std::size_t line_count(std::string_view text) {
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

NormalizeResult normalize_source(std::string_view raw) {
    enum class State { code, line_comment, block_comment, string_lit };
    NormalizeResult out;
    out.text.assign(raw.begin(), raw.end());
    std::string& t = out.text;

    State state = State::code;
    char quote = '"';
    std::size_t i = 0;
    const std::size_t n = t.size();
    while (i < n) {
        char c = t[i];
        switch (state) {
        case State::code:
            if (c == '/' && i + 1 < n && t[i + 1] == '/') {
                state = State::line_comment;
                t[i] = ' ';
                t[i + 1] = ' ';
                i += 2;
            } else if (c == '/' && i + 1 < n && t[i + 1] == '*') {
                state = State::block_comment;
                t[i] = ' ';
                t[i + 1] = ' ';
                i += 2;
            } else if (c == '"' || c == '\'') {
                state = State::string_lit;
                quote = c;
                ++i;  // keep the opening quote
            } else {
                ++i;
            }
            break;
        case State::line_comment:
            if (c == '\n') {
                state = State::code;
            } else {
                t[i] = ' ';
            }
            ++i;
            break;
        case State::block_comment:
            if (c == '*' && i + 1 < n && t[i + 1] == '/') {
                t[i] = ' ';
                t[i + 1] = ' ';
                state = State::code;
                i += 2;
            } else {
                if (c != '\n') t[i] = ' ';
                ++i;
            }
            break;
        case State::string_lit:
            if (c == '\\' && i + 1 < n) {
                t[i] = ' ';
                if (t[i + 1] != '\n') t[i + 1] = ' ';
                i += 2;  // escape sequence is interior text
            } else if (c == quote) {
                state = State::code;
                ++i;  // keep the closing quote
            } else {
                if (c != '\n') t[i] = ' ';
                ++i;
            }
            break;
        }
    }
    if (state == State::block_comment)
        out.warnings.push_back("unterminated block comment (blanked to end of file)");
    if (state == State::string_lit)
        out.warnings.push_back("unterminated string literal (blanked to end of file)");

    for (char& ch : t) {
        if (!is_kept_ascii(static_cast<unsigned char>(ch))) ch = ' ';
    }
    return out;
}

ContractSource make_source(std::string id, std::string raw_text) {
    ContractSource src;
    src.id = std::move(id);
    src.normalized_text = normalize_source(raw_text).text;
    src.raw_text = std::move(raw_text);
    return src;
}

std::string source_id_from_name(std::string_view name) {
    std::string stem(name);
    // strip any directory part
    auto slash = stem.find_last_of("/\\");
    if (slash != std::string::npos) stem = stem.substr(slash + 1);
    if (stem.size() >= 4) {
        std::string tail = stem.substr(stem.size() - 4);
        std::transform(tail.begin(), tail.end(), tail.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (tail == ".sol") stem.resize(stem.size() - 4);
    }
    std::transform(stem.begin(), stem.end(), stem.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return stem;
}

std::vector<ContractSource> load_corpus(const std::filesystem::path& directory) {
    namespace fs = std::filesystem;
    if (!fs::exists(directory) || !fs::is_directory(directory))
        throw Error("corpus directory does not exist: " + directory.string());

    std::vector<fs::path> candidates;
    for (const auto& entry : fs::directory_iterator(directory)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (ext == ".sol") candidates.push_back(entry.path());
    }
    std::sort(candidates.begin(), candidates.end());

    std::map<std::string, fs::path> seen;
    std::vector<ContractSource> sources;
    sources.reserve(candidates.size());
    for (const auto& path : candidates) {
        std::string id = source_id_from_name(path.filename().string());
        auto [it, inserted] = seen.emplace(id, path);
        if (!inserted)
            throw Error("duplicate contract id '" + id + "': " + it->second.string() + " and " +
                        path.string());
        std::ifstream in(path, std::ios::binary);
        if (!in) throw Error("cannot read contract file: " + path.string());
        std::ostringstream buf;
        buf << in.rdbuf();
        if (in.bad()) throw Error("cannot read contract file: " + path.string());
        sources.push_back(make_source(std::move(id), std::move(buf).str()));
    }
    std::sort(sources.begin(), sources.end(),
              [](const ContractSource& a, const ContractSource& b) { return a.id < b.id; });
    return sources;
}

}  // namespace nftscan
