#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nftscan/family.hpp"

namespace nftscan {

// Synthetic labeled corpus: a clean ERC-721-style template per family plus a
// mutation that plants that family's vulnerability. Planted contracts always
// fire the family's designated anchor bit and clean ones never do; secondary
// bits vary per contract so the learners see non-degenerate columns.
struct GeneratedContract {
    std::string filename;  // e.g. um0004.sol
    std::string text;
    int label = 0;  // 1 = planted
};

// Bit index that tracks the planting flag exactly (RMP->A3, ERC721R->B3,
// UM->C1, MR->D2, PB->E4).
int designated_anchor_bit(Family family);

// Deterministic per (family, seed); contracts alternate planted/clean.
std::vector<GeneratedContract> generate_family_corpus(Family family, int count,
                                                      std::uint64_t seed);

// Writes the .sol files plus labels.csv (`File,Risk`) into out_dir.
void write_corpus(const std::vector<GeneratedContract>& contracts,
                  const std::filesystem::path& out_dir);

}  // namespace nftscan
