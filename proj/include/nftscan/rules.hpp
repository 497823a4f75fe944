#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nftscan/family.hpp"
#include "nftscan/scan.hpp"

namespace nftscan {

enum class Polarity { presence, absence };

// One detector. Generic semantics, evaluated per function and OR-ed across
// functions when any pattern is function-scoped (existential file aggregation):
//
//   fires = (every all_of matches) and (any_of empty or some any_of matches)
//           and (no none_of matches)
//
// For absence-polarity detectors the none_of list holds the guards, so the
// same formula reads "anchor present and guard missing". A handful of
// detectors (known by name) refine this with order- or statement-sensitive
// checks that plain pattern logic cannot express; their pattern lists still
// supply the vocabulary and stay file-configurable.
struct DetectionRule {
    std::string code;  // A1..E6
    Family family = Family::rmp;
    std::string name;  // detector function name, e.g. detect_proxy_call
    std::vector<Pattern> all_of;
    std::vector<Pattern> any_of;
    std::vector<Pattern> none_of;
    Polarity polarity = Polarity::presence;

    bool operator==(const DetectionRule&) const = default;
};

struct RuleSet {
    std::string version;
    std::vector<DetectionRule> rules;  // exactly 36, ordered A1..E6

    const DetectionRule& rule_for(Family family, int index) const;
    std::vector<const DetectionRule*> rules_for(Family family) const;

    bool operator==(const RuleSet&) const = default;
};

// The default 36-rule set; stable across runs and passes validate_rules.
const RuleSet& builtin_rules();

// Throws on structural problems: wrong rule count, unknown/duplicate codes,
// missing codes, family/code mismatch, empty pattern lists, empty needles.
void validate_rules(const RuleSet& ruleset);

RuleSet load_rules(const std::filesystem::path& path);
void save_rules(const RuleSet& ruleset, const std::filesystem::path& path);

bool evaluate_rule(const DetectionRule& rule, const ContractSource& source,
                   const std::vector<FunctionSpan>& spans);

}  // namespace nftscan
