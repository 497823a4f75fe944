#pragma once

#include <vector>

#include "nftscan/dataset.hpp"
#include "nftscan/rules.hpp"

namespace nftscan {

// Bit i = evaluate_rule(rules_for(family)[i]); pure in normalized_text.
FeatureVector extract_features(const ContractSource& source, Family family,
                               const RuleSet& ruleset);

// All five vectors of one contract, computed over a single function scan.
std::vector<FeatureVector> extract_all_families(const ContractSource& source,
                                                const RuleSet& ruleset);

// Joins sources with a label table; one sample per label entry, sorted by id.
// A labeled id without a source is an error listing the missing ids.
LabeledDataset build_dataset(const std::vector<ContractSource>& sources,
                             const LabelTable& labels, Family family, const RuleSet& ruleset);

}  // namespace nftscan
