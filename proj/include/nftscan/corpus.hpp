#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nftscan/family.hpp"

namespace nftscan {

// One Solidity file. `normalized_text` has the same line count as `raw_text`
// with comments, string-literal interiors, and non-ASCII bytes blanked to
// spaces, so detector patterns never fire on stripped content and diagnostics
// keep true line/column positions.
struct ContractSource {
    std::string id;  // lowercase filename stem, extension dropped
    std::string raw_text;
    std::string normalized_text;

    bool operator==(const ContractSource&) const = default;
};

struct NormalizeResult {
    std::string text;
    std::vector<std::string> warnings;  // unterminated comment/string diagnostics
};

NormalizeResult normalize_source(std::string_view raw_text);

ContractSource make_source(std::string id, std::string raw_text);

// Normalized id for a contract file path or a CSV File cell: lowercase stem,
// a trailing ".sol" (any case) dropped.
std::string source_id_from_name(std::string_view name);

// Loads every readable `.sol` file (suffix match is case-insensitive) in
// `directory`, normalized, sorted by id. Duplicate ids and unreadable files
// are errors; an empty directory yields an empty list.
std::vector<ContractSource> load_corpus(const std::filesystem::path& directory);

std::size_t line_count(std::string_view text);

}  // namespace nftscan
