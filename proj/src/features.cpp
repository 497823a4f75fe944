#include "nftscan/features.hpp"

#include <algorithm>

namespace nftscan {

namespace {

FeatureVector extract_with_spans(const ContractSource& source, Family family,
                                 const RuleSet& ruleset,
                                 const std::vector<FunctionSpan>& spans) {
    FeatureVector fv;
    fv.family = family;
    auto rules = ruleset.rules_for(family);
    fv.bits.reserve(rules.size());
    for (const DetectionRule* r : rules) fv.bits.push_back(evaluate_rule(*r, source, spans));
    return fv;
}

}  // namespace

FeatureVector extract_features(const ContractSource& source, Family family,
                               const RuleSet& ruleset) {
    auto scan = extract_functions(source.normalized_text);
    return extract_with_spans(source, family, ruleset, scan.functions);
}

std::vector<FeatureVector> extract_all_families(const ContractSource& source,
                                                const RuleSet& ruleset) {
    auto scan = extract_functions(source.normalized_text);
    std::vector<FeatureVector> out;
    out.reserve(all_families.size());
    for (Family f : all_families)
        out.push_back(extract_with_spans(source, f, ruleset, scan.functions));
    return out;
}

LabeledDataset build_dataset(const std::vector<ContractSource>& sources,
                             const LabelTable& labels, Family family, const RuleSet& ruleset) {
    LabeledDataset ds;
    ds.family = family;

    std::string missing;
    for (const auto& [id, label] : labels.entries) {
        auto it = std::find_if(sources.begin(), sources.end(),
                               [&](const ContractSource& s) { return s.id == id; });
        if (it == sources.end()) {
            missing += missing.empty() ? id : ", " + id;
            continue;
        }
        Sample s;
        s.id = id;
        s.features = extract_features(*it, family, ruleset);
        s.label = label;
        ds.samples.push_back(std::move(s));
    }
    if (!missing.empty()) throw Error("labels reference unknown contract ids: " + missing);
    std::sort(ds.samples.begin(), ds.samples.end(),
              [](const Sample& a, const Sample& b) { return a.id < b.id; });
    return ds;
}

}  // namespace nftscan
