#include "nftscan/family.hpp"

#include <algorithm>
#include <cctype>

namespace nftscan {

Family parse_family(std::string_view tag) {
    std::string up(tag);
    std::transform(up.begin(), up.end(), up.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    for (Family f : all_families) {
        if (up == family_tag(f)) return f;
    }
    throw Error("unknown family '" + std::string(tag) +
                "' (expected one of RMP, ERC721R, UM, MR, PB)");
}

std::pair<Family, int> parse_feature_code(std::string_view code) {
    if (code.size() < 2) throw Error("malformed feature code '" + std::string(code) + "'");
    char prefix = code[0];
    Family fam;
    switch (prefix) {
    case 'A': fam = Family::rmp; break;
    case 'B': fam = Family::erc721r; break;
    case 'C': fam = Family::um; break;
    case 'D': fam = Family::mr; break;
    case 'E': fam = Family::pb; break;
    default: throw Error("unknown feature code '" + std::string(code) + "'");
    }
    int index = 0;
    for (char c : code.substr(1)) {
        if (c < '0' || c > '9') throw Error("malformed feature code '" + std::string(code) + "'");
        index = index * 10 + (c - '0');
    }
    if (index < 1 || index > family_arity(fam))
        throw Error("unknown feature code '" + std::string(code) + "'");
    return {fam, index - 1};
}

}  // namespace nftscan
