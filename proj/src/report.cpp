#include "nftscan/report.hpp"

#include <algorithm>

#include <json.hpp>

namespace nftscan {

Metrics metrics(const Confusion& c) {
    if (c.total() == 0) throw Error("metrics of an empty confusion");
    Metrics m;
    m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
    m.precision = (c.tp + c.fp) ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp)
                                : 0.0;
    m.recall =
        (c.tp + c.fn) ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
    m.f1 = (m.precision + m.recall > 0.0)
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    return m;
}

ScanReport scan(const std::vector<ContractSource>& sources,
                const std::map<Family, ForestModel>& models, const RuleSet& ruleset) {
    validate_rules(ruleset);
    for (const auto& [family, model] : models) {
        if (model.family != family)
            throw Error("model registered under " + std::string(family_tag(family)) +
                        " was trained for " + std::string(family_tag(model.family)));
    }

    ScanReport report;
    report.ruleset_version = ruleset.version;
    std::vector<const ContractSource*> ordered;
    ordered.reserve(sources.size());
    for (const ContractSource& s : sources) ordered.push_back(&s);
    std::sort(ordered.begin(), ordered.end(),
              [](const ContractSource* a, const ContractSource* b) { return a->id < b->id; });

    for (const ContractSource* src : ordered) {
        ContractReport cr;
        cr.id = src->id;
        auto vectors = extract_all_families(*src, ruleset);
        for (std::size_t fi = 0; fi < all_families.size(); ++fi) {
            Family family = all_families[fi];
            auto it = models.find(family);
            if (it == models.end()) continue;
            const FeatureVector& fv = vectors[fi];
            FamilyFinding finding;
            finding.family = family;
            auto [v0, v1] = predict_votes(it->second, fv);
            finding.votes0 = v0;
            finding.votes1 = v1;
            finding.prediction = v1 > v0 ? 1 : 0;
            for (std::size_t b = 0; b < fv.bits.size(); ++b)
                if (fv.bits[b]) finding.fired_codes.push_back(
                        feature_code(family, static_cast<int>(b)));
            cr.findings.push_back(std::move(finding));
        }
        report.contracts.push_back(std::move(cr));
    }
    return report;
}

std::string render_text(const ScanReport& report) {
    std::string out;
    out += "ruleset " + report.ruleset_version + ", " +
           std::to_string(report.contracts.size()) + " contract(s)\n";
    for (const ContractReport& cr : report.contracts) {
        out += "\n" + cr.id + "\n";
        for (const FamilyFinding& f : cr.findings) {
            out += "  " + std::string(family_tag(f.family)) + ": " +
                   (f.prediction ? "RISK" : "ok");
            out += " (votes " + std::to_string(f.votes1) + "/" +
                   std::to_string(f.votes0 + f.votes1) + ")";
            if (!f.fired_codes.empty()) {
                out += " fired:";
                for (const std::string& code : f.fired_codes) out += " " + code;
            }
            out += "\n";
        }
    }
    return out;
}

std::string render_json(const ScanReport& report) {
    nlohmann::ordered_json j;
    j["ruleset_version"] = report.ruleset_version;
    nlohmann::ordered_json contracts = nlohmann::ordered_json::array();
    for (const ContractReport& cr : report.contracts) {
        nlohmann::ordered_json jc;
        jc["id"] = cr.id;
        nlohmann::ordered_json families = nlohmann::ordered_json::object();
        for (const FamilyFinding& f : cr.findings) {
            nlohmann::ordered_json jf;
            jf["prediction"] = f.prediction;
            jf["votes"] = {f.votes0, f.votes1};
            jf["fired"] = f.fired_codes;
            families[std::string(family_tag(f.family))] = std::move(jf);
        }
        jc["families"] = std::move(families);
        contracts.push_back(std::move(jc));
    }
    j["contracts"] = std::move(contracts);
    return j.dump(1) + "\n";
}

}  // namespace nftscan
