#pragma once

#include <map>
#include <string>
#include <vector>

#include "nftscan/features.hpp"
#include "nftscan/forest.hpp"

namespace nftscan {

struct Confusion {
    std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;  // positive class = label 1

    void add(int truth, int predicted) {
        if (truth == 1)
            (predicted == 1 ? tp : fn)++;
        else
            (predicted == 1 ? fp : tn)++;
    }
    std::uint64_t total() const { return tp + fp + fn + tn; }
    bool operator==(const Confusion&) const = default;
};

struct Metrics {
    double accuracy = 0.0;
    double precision = 0.0;  // 0 when tp+fp == 0
    double recall = 0.0;     // 0 when tp+fn == 0
    double f1 = 0.0;         // 0 when precision+recall == 0
};

Metrics metrics(const Confusion& confusion);

// Per-contract, per-family verdicts with the fired feature bits for
// explainability.
struct FamilyFinding {
    Family family = Family::rmp;
    int prediction = 0;
    int votes0 = 0, votes1 = 0;
    std::vector<std::string> fired_codes;  // codes whose bit is true
};

struct ContractReport {
    std::string id;
    std::vector<FamilyFinding> findings;  // families in canonical order
};

struct ScanReport {
    std::string ruleset_version;
    std::vector<ContractReport> contracts;  // ordered by id
};

// Runs every supplied family model over every contract. Models must agree
// with the ruleset's feature order (arity check).
ScanReport scan(const std::vector<ContractSource>& sources,
                const std::map<Family, ForestModel>& models, const RuleSet& ruleset);

std::string render_text(const ScanReport& report);
std::string render_json(const ScanReport& report);

}  // namespace nftscan
