#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nftscan {

// Library-wide error type; the CLI maps it to exit code 2.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// The five vulnerability families, each with its own feature codes and model.
enum class Family { rmp, erc721r, um, mr, pb };

inline constexpr std::array<Family, 5> all_families{Family::rmp, Family::erc721r, Family::um,
                                                    Family::mr, Family::pb};

constexpr int family_arity(Family f) {
    switch (f) {
    case Family::rmp: return 6;
    case Family::erc721r: return 8;
    case Family::um: return 8;
    case Family::mr: return 8;
    case Family::pb: return 6;
    }
    return 0;
}

constexpr char family_code_prefix(Family f) {
    switch (f) {
    case Family::rmp: return 'A';
    case Family::erc721r: return 'B';
    case Family::um: return 'C';
    case Family::mr: return 'D';
    case Family::pb: return 'E';
    }
    return '?';
}

constexpr std::string_view family_tag(Family f) {
    switch (f) {
    case Family::rmp: return "RMP";
    case Family::erc721r: return "ERC721R";
    case Family::um: return "UM";
    case Family::mr: return "MR";
    case Family::pb: return "PB";
    }
    return "?";
}

constexpr std::string_view family_display_name(Family f) {
    switch (f) {
    case Family::rmp: return "Risky Mutable Proxy";
    case Family::erc721r: return "ERC-721 Reentrancy";
    case Family::um: return "Unlimited Minting";
    case Family::mr: return "Missing Requirements";
    case Family::pb: return "Public Burn";
    }
    return "?";
}

Family parse_family(std::string_view tag);

// Feature code for position `index` within a family, e.g. (UM, 0) -> "C1".
inline std::string feature_code(Family f, int index) {
    return std::string(1, family_code_prefix(f)) + std::to_string(index + 1);
}

// Inverse of feature_code; returns (family, index) or throws.
std::pair<Family, int> parse_feature_code(std::string_view code);

}  // namespace nftscan
