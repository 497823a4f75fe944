#include "nftscan/rules.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace nftscan {

namespace {

constexpr std::string_view kExternalCalls = "call|send|transfer|safeTransferFrom|onERC721Received";

Pattern pat(PatternKind kind, PatternScope scope, std::string_view needle) {
    return Pattern{kind, scope, std::string(needle)};
}

Pattern id_sig(std::string_view needle) {
    return pat(PatternKind::identifier, PatternScope::function_signature, needle);
}
Pattern id_body(std::string_view needle) {
    return pat(PatternKind::identifier, PatternScope::function_body, needle);
}
Pattern id_file(std::string_view needle) {
    return pat(PatternKind::identifier, PatternScope::file, needle);
}
Pattern call_body(std::string_view needle) {
    return pat(PatternKind::call, PatternScope::function_body, needle);
}
Pattern call_file(std::string_view needle) {
    return pat(PatternKind::call, PatternScope::file, needle);
}
Pattern sub_body(std::string_view needle) {
    return pat(PatternKind::substring, PatternScope::function_body, needle);
}
Pattern sub_sig(std::string_view needle) {
    return pat(PatternKind::substring, PatternScope::function_signature, needle);
}
Pattern sub_file(std::string_view needle) {
    return pat(PatternKind::substring, PatternScope::file, needle);
}

DetectionRule rule(std::string_view code, Family family, std::string_view name,
                   Polarity polarity, std::vector<Pattern> all_of, std::vector<Pattern> any_of,
                   std::vector<Pattern> none_of) {
    DetectionRule r;
    r.code = std::string(code);
    r.family = family;
    r.name = std::string(name);
    r.polarity = polarity;
    r.all_of = std::move(all_of);
    r.any_of = std::move(any_of);
    r.none_of = std::move(none_of);
    return r;
}

RuleSet make_builtin() {
    using P = Polarity;
    const Family A = Family::rmp, B = Family::erc721r, C = Family::um, D = Family::mr,
                 E = Family::pb;

    // proxy setter anchor shared by A2..A4, A6
    auto setter_all = [] { return std::vector<Pattern>{id_sig("public|external")}; };
    auto setter_any = [] {
        return std::vector<Pattern>{id_sig("setProxy|upgradeTo|setImplementation"),
                                    sub_body("proxy=")};
    };
    // public mint anchor shared by the C family
    auto mint_any = [] {
        return std::vector<Pattern>{id_sig("mint|_mint|safeMint"), call_body("_mint|safeMint")};
    };
    // public burn anchor shared by the E family
    auto burn_any = [] {
        return std::vector<Pattern>{id_sig("burn|_burn"), call_body("_burn")};
    };
    auto pub = [] { return std::vector<Pattern>{id_sig("public|external")}; };

    RuleSet rs;
    rs.version = "builtin-1";
    rs.rules = {
        rule("A1", A, "detect_proxy_call", P::presence, {},
             {id_file("delegatecall|proxy|implementation")}, {}),
        rule("A2", A, "detect_parameter_setting", P::presence, setter_all(), setter_any(), {}),
        rule("A3", A, "detect_permission_control", P::absence, setter_all(), setter_any(),
             {id_sig("onlyOwner|onlyRole"), sub_body("require(msg.sender")}),
        rule("A4", A, "detect_state_change", P::absence, setter_all(), setter_any(),
             {id_body("emit")}),
        rule("A5", A, "detect_insurance_function", P::presence,
             {id_file("delegatecall|proxy|implementation")},
             {call_file("transferFrom|selfdestruct")}, {}),
        rule("A6", A, "detect_condition_check", P::absence, setter_all(), setter_any(),
             {call_body("require")}),

        rule("B1", B, "detect_external_call_locations", P::presence, {},
             {call_body(kExternalCalls)}, {}),
        rule("B2", B, "detect_locking_mechanism", P::absence, {call_body(kExternalCalls)}, {},
             {id_file("nonReentrant|ReentrancyGuard|mutex|locked")}),
        rule("B3", B, "detect_reentrancy_vulnerability", P::presence,
             {id_body("balances|balance|owners|_owner")}, {call_body(kExternalCalls)}, {}),
        rule("B4", B, "detect_asset_transfer_vulnerability", P::presence, {id_sig("public")},
             {call_body("safeTransferFrom|transfer")}, {call_body("require")}),
        rule("B5", B, "detect_state_change_separation", P::absence, {sub_body("=")},
             {call_body(kExternalCalls)}, {}),
        rule("B6", B, "detect_unhandled_external_call", P::presence, {}, {sub_body(".call(")},
             {}),
        rule("B7", B, "detect_missing_state_check_update", P::absence,
             {id_sig("withdraw|redeem")}, {call_body(kExternalCalls)}, {}),
        rule("B8", B, "detect_missing_exception_handling", P::absence,
             {call_body(kExternalCalls)}, {},
             {call_body("require|assert"), id_body("revert")}),

        rule("C1", C, "detect_unverified_minting", P::absence, pub(), mint_any(),
             {id_sig("onlyOwner|onlyRole"), sub_body("require(msg.sender")}),
        rule("C2", C, "detect_total_supply_limit", P::absence, pub(), mint_any(),
             {id_file("maxSupply|MAX_SUPPLY|cap"), sub_file("totalSupply<")}),
        rule("C3", C, "detect_condition_missing", P::absence, pub(), mint_any(),
             {call_body("require")}),
        rule("C4", C, "detect_extendable_minting_logic", P::presence,
             {id_sig("public|external"), sub_body("for(|while(")}, mint_any(), {}),
        rule("C5", C, "detect_is_unlimited_minting", P::absence, pub(), mint_any(),
             {id_file("paused|whenNotPaused|Pausable|saleActive")}),
        rule("C6", C, "detect_unreasonable_minting_fee", P::absence,
             {id_sig("public|external"), id_sig("payable")}, mint_any(),
             {sub_body("require(msg.value")}),
        rule("C7", C, "detect_external_calls", P::presence,
             {id_sig("public|external"), id_sig("mint|_mint|safeMint")}, {sub_body(".call(")},
             {}),
        rule("C8", C, "detect_permission_role_abuse", P::presence, pub(),
             {id_sig("grantRole|addMinter|setMinter")},
             {id_sig("onlyOwner|onlyRole"), sub_body("require(msg.sender")}),

        rule("D1", D, "detect_missing_input_validation", P::absence,
             {id_sig("public|external")}, {}, {call_body("require"), sub_sig("()")}),
        rule("D2", D, "detect_missing_security_checks", P::absence, {id_file("function")}, {},
             {call_file("require|assert"), id_file("revert")}),
        rule("D3", D, "detect_missing_transfer_restrictions", P::absence, {},
             {id_sig("transfer|transferFrom")},
             {call_body("require"), id_sig("onlyOwner|whenNotPaused")}),
        rule("D4", D, "detect_missing_auditing_functions", P::absence, {id_file("function")}, {},
             {id_file("event|emit")}),
        rule("D5", D, "detect_missing_event_functions", P::absence,
             {id_sig("public|external"), sub_body("=")}, {}, {id_body("emit")}),
        rule("D6", D, "detect_missing_permission_functions", P::absence, {id_file("function")},
             {}, {id_file("onlyOwner|Ownable|AccessControl|onlyRole")}),
        rule("D7", D, "detect_missing_update_mechanism", P::absence, {id_file("function")}, {},
             {id_file("upgradeTo|UUPS|Proxy|initialize")}),
        rule("D8", D, "detect_missing_metadata_validation", P::absence, {},
             {id_sig("tokenURI|setBaseURI")}, {call_body("require")}),

        rule("E1", E, "detect_burn_requires_authentication", P::absence, pub(), burn_any(),
             {id_sig("onlyOwner"), sub_body("require(msg.sender"),
              id_body("_isApprovedOrOwner")}),
        rule("E2", E, "detect_lack_of_confirmation_recovery", P::absence, pub(), burn_any(),
             {id_file("confirm|timelock|pending")}),
        rule("E3", E, "detect_improper_authorization", P::presence,
             {id_sig("public|external"), id_sig("onlyOwner")}, burn_any(),
             {call_body("ownerOf"), id_body("_isApprovedOrOwner")}),
        rule("E4", E, "detect_unverified_owner", P::absence, pub(), burn_any(),
             {call_body("ownerOf"), id_body("_isApprovedOrOwner")}),
        rule("E5", E, "detect_missing_event_logs", P::absence, pub(), burn_any(),
             {id_body("emit")}),
        rule("E6", E, "detect_duplicate_destruction", P::absence, pub(), burn_any(),
             {call_body("_exists")}),
    };
    return rs;
}

// --- evaluation -------------------------------------------------------------

struct EvalParts {
    bool all_ok = false;
    bool any_ok = false;   // true when any_of is empty
    bool none_ok = false;  // true when no none_of pattern matched
};

bool uses_scope(const DetectionRule& r, PatternScope scope) {
    auto in = [scope](const std::vector<Pattern>& v) {
        return std::any_of(v.begin(), v.end(),
                           [scope](const Pattern& p) { return p.scope == scope; });
    };
    return in(r.all_of) || in(r.any_of) || in(r.none_of);
}

EvalParts eval_parts(const DetectionRule& r, std::string_view text, const FunctionSpan* fn) {
    EvalParts parts;
    parts.all_ok = std::all_of(r.all_of.begin(), r.all_of.end(), [&](const Pattern& p) {
        return match_pattern_in(text, fn, p);
    });
    parts.any_ok = r.any_of.empty() ||
                   std::any_of(r.any_of.begin(), r.any_of.end(), [&](const Pattern& p) {
                       return match_pattern_in(text, fn, p);
                   });
    parts.none_ok = std::none_of(r.none_of.begin(), r.none_of.end(), [&](const Pattern& p) {
        return match_pattern_in(text, fn, p);
    });
    return parts;
}

bool generic_fires(const EvalParts& p) { return p.all_ok && p.any_ok && p.none_ok; }

std::string_view body_text(std::string_view text, const FunctionSpan& fn) {
    return text.substr(fn.body_begin, fn.body_end - fn.body_begin);
}

// First offset of a call-kind match of any any_of pattern within the body.
std::size_t first_any_call_offset(const DetectionRule& r, std::string_view body) {
    std::size_t best = std::string_view::npos;
    for (const Pattern& p : r.any_of) {
        if (p.kind != PatternKind::call) continue;
        auto offs = identifier_offsets(body, p.needle, /*require_call=*/true);
        if (!offs.empty()) best = std::min(best, offs.front());
    }
    return best;
}

// `Ixxx(` style invocation of an interface-typed expression.
bool has_interface_call(std::string_view body) {
    for (std::size_t i = 0; i + 1 < body.size(); ++i) {
        if (body[i] != 'I' || (i > 0 && is_word_char(body[i - 1]))) continue;
        if (!std::isupper(static_cast<unsigned char>(body[i + 1]))) continue;
        std::size_t j = i;
        while (j < body.size() && is_word_char(body[j])) ++j;
        std::size_t k = j;
        while (k < body.size() && std::isspace(static_cast<unsigned char>(body[k]))) ++k;
        if (k < body.size() && body[k] == '(') return true;
    }
    return false;
}

// external call followed by an assignment to a watched identifier (B3) or to
// anything at all (B5)
bool call_then_assignment(const DetectionRule& r, std::string_view body,
                          std::string_view watched) {
    std::size_t first_call = first_any_call_offset(r, body);
    if (first_call == std::string_view::npos) return false;
    for (std::size_t off : assignment_offsets(body, watched))
        if (off > first_call) return true;
    return false;
}

// `.call(` occurrences whose statement carries neither `require(` nor `(bool`
bool has_unguarded_low_level_call(std::string_view body) {
    auto offs = identifier_offsets(body, "call", /*require_call=*/true);
    for (std::size_t off : offs) {
        if (off == 0 || body[off - 1] != '.') continue;
        std::size_t stmt = body.find_last_of(";{}", off);
        std::size_t begin = stmt == std::string_view::npos ? 0 : stmt + 1;
        std::string_view segment = body.substr(begin, off - begin);
        if (!dense_contains(segment, "require(") && !dense_contains(segment, "(bool"))
            return true;
    }
    return false;
}

using CompositeFn =
    std::function<bool(const DetectionRule&, std::string_view body, const EvalParts&)>;

const std::map<std::string, CompositeFn>& composites() {
    static const std::map<std::string, CompositeFn> table = {
        {"detect_reentrancy_vulnerability",
         [](const DetectionRule& r, std::string_view body, const EvalParts& p) {
             return p.all_ok && p.any_ok && p.none_ok &&
                    call_then_assignment(r, body, r.all_of.front().needle);
         }},
        {"detect_state_change_separation",
         [](const DetectionRule& r, std::string_view body, const EvalParts& p) {
             return p.all_ok && p.any_ok && p.none_ok && call_then_assignment(r, body, {});
         }},
        {"detect_unhandled_external_call",
         [](const DetectionRule&, std::string_view body, const EvalParts& p) {
             return p.none_ok && has_unguarded_low_level_call(body);
         }},
        {"detect_missing_state_check_update",
         [](const DetectionRule& r, std::string_view body, const EvalParts& p) {
             if (!(p.all_ok && p.any_ok && p.none_ok)) return false;
             std::size_t first_call = first_any_call_offset(r, body);
             auto requires_ = identifier_offsets(body, "require", /*require_call=*/true);
             return requires_.empty() || requires_.front() > first_call;
         }},
        {"detect_missing_event_functions",
         [](const DetectionRule&, std::string_view body, const EvalParts& p) {
             return p.all_ok && p.any_ok && p.none_ok &&
                    !assignment_offsets(body, {}).empty();
         }},
        {"detect_external_calls",
         [](const DetectionRule&, std::string_view body, const EvalParts& p) {
             return p.all_ok && p.none_ok && (p.any_ok || has_interface_call(body));
         }},
    };
    return table;
}

}  // namespace

const RuleSet& builtin_rules() {
    static const RuleSet rs = [] {
        RuleSet r = make_builtin();
        validate_rules(r);
        return r;
    }();
    return rs;
}

const DetectionRule& RuleSet::rule_for(Family family, int index) const {
    std::string code = feature_code(family, index);
    for (const DetectionRule& r : rules)
        if (r.code == code) return r;
    throw Error("ruleset has no rule " + code);
}

std::vector<const DetectionRule*> RuleSet::rules_for(Family family) const {
    std::vector<const DetectionRule*> out;
    for (const DetectionRule& r : rules)
        if (r.family == family) out.push_back(&r);
    std::sort(out.begin(), out.end(), [](const DetectionRule* a, const DetectionRule* b) {
        return a->code < b->code;
    });
    return out;
}

void validate_rules(const RuleSet& ruleset) {
    std::map<std::string, int> expected;  // code -> count seen
    for (Family f : all_families)
        for (int i = 0; i < family_arity(f); ++i) expected[feature_code(f, i)] = 0;

    for (const DetectionRule& r : ruleset.rules) {
        auto it = expected.find(r.code);
        if (it == expected.end())
            throw Error("rule " + r.code + " (" + r.name + "): unknown code");
        if (++it->second > 1) throw Error("rule " + r.code + ": duplicate code");
        auto [fam, idx] = parse_feature_code(r.code);
        (void)idx;
        if (fam != r.family)
            throw Error("rule " + r.code + " (" + r.name + "): family " +
                        std::string(family_tag(r.family)) + " does not match its code");
        if (r.all_of.empty() && r.any_of.empty() && r.none_of.empty())
            throw Error("rule " + r.code + " (" + r.name + "): all pattern lists are empty");
        if (r.name.empty()) throw Error("rule " + r.code + ": missing name");
        for (const auto* list : {&r.all_of, &r.any_of, &r.none_of}) {
            for (const Pattern& p : *list) {
                if (p.needle.empty())
                    throw Error("rule " + r.code + " (" + r.name + "): empty pattern needle");
                std::size_t start = 0;
                while (start <= p.needle.size()) {
                    std::size_t bar = p.needle.find('|', start);
                    std::size_t len =
                        (bar == std::string::npos ? p.needle.size() : bar) - start;
                    if (len == 0)
                        throw Error("rule " + r.code + " (" + r.name +
                                    "): empty alternative in needle '" + p.needle + "'");
                    if (bar == std::string::npos) break;
                    start = bar + 1;
                }
            }
        }
    }
    for (const auto& [code, count] : expected)
        if (count == 0) throw Error("ruleset is missing rule " + code);
    if (ruleset.rules.size() != expected.size())
        throw Error("ruleset must contain exactly " + std::to_string(expected.size()) +
                    " rules, found " + std::to_string(ruleset.rules.size()));
}

bool evaluate_rule(const DetectionRule& rule, const ContractSource& source,
                   const std::vector<FunctionSpan>& spans) {
    const std::string_view text = source.normalized_text;
    const auto& comp = composites();
    auto comp_it = comp.find(rule.name);

    bool per_function = uses_scope(rule, PatternScope::function_body) ||
                        uses_scope(rule, PatternScope::function_signature);
    if (!per_function) {
        EvalParts parts = eval_parts(rule, text, nullptr);
        if (comp_it != comp.end()) return comp_it->second(rule, {}, parts);
        return generic_fires(parts);
    }

    bool needs_body = uses_scope(rule, PatternScope::function_body);
    for (const FunctionSpan& fn : spans) {
        if (needs_body && !fn.has_body()) continue;
        EvalParts parts = eval_parts(rule, text, &fn);
        bool fires = comp_it != comp.end()
                         ? comp_it->second(rule, body_text(text, fn), parts)
                         : generic_fires(parts);
        if (fires) return true;
    }
    return false;
}

// --- rule file I/O ----------------------------------------------------------

namespace {

std::string_view kind_name(PatternKind k) {
    switch (k) {
    case PatternKind::identifier: return "identifier";
    case PatternKind::call: return "call";
    case PatternKind::substring: return "substring";
    }
    return "?";
}

std::string_view scope_name(PatternScope s) {
    switch (s) {
    case PatternScope::file: return "file";
    case PatternScope::function_body: return "function_body";
    case PatternScope::function_signature: return "function_signature";
    }
    return "?";
}

PatternKind parse_kind(std::string_view s, const std::string& where) {
    if (s == "identifier") return PatternKind::identifier;
    if (s == "call") return PatternKind::call;
    if (s == "substring") return PatternKind::substring;
    throw Error(where + ": unknown pattern kind '" + std::string(s) + "'");
}

PatternScope parse_scope(std::string_view s, const std::string& where) {
    if (s == "file") return PatternScope::file;
    if (s == "function_body") return PatternScope::function_body;
    if (s == "function_signature") return PatternScope::function_signature;
    throw Error(where + ": unknown pattern scope '" + std::string(s) + "'");
}

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

Pattern parse_pattern_spec(const std::string& value, const std::string& where) {
    std::size_t c1 = value.find(':');
    std::size_t c2 = c1 == std::string::npos ? std::string::npos : value.find(':', c1 + 1);
    if (c2 == std::string::npos)
        throw Error(where + ": pattern must be <kind>:<scope>:<needle>, found '" + value + "'");
    Pattern p;
    p.kind = parse_kind(trim(value.substr(0, c1)), where);
    p.scope = parse_scope(trim(value.substr(c1 + 1, c2 - c1 - 1)), where);
    p.needle = value.substr(c2 + 1);
    if (p.needle.empty()) throw Error(where + ": empty pattern needle");
    return p;
}

}  // namespace

void save_rules(const RuleSet& ruleset, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write rule file: " + path.string());
    out << "# nftscan detection rules\n";
    out << "# pattern lines: all_of|any_of|none_of = <kind>:<scope>:<needle>\n";
    out << "#   kind:  identifier | call | substring\n";
    out << "#   scope: file | function_body | function_signature\n";
    out << "#   needle may hold |-separated alternatives\n";
    out << "version = " << ruleset.version << "\n";
    for (const DetectionRule& r : ruleset.rules) {
        out << "\n[rule " << r.code << "]\n";
        out << "name = " << r.name << "\n";
        out << "family = " << family_tag(r.family) << "\n";
        out << "polarity = " << (r.polarity == Polarity::presence ? "presence" : "absence")
            << "\n";
        for (const Pattern& p : r.all_of)
            out << "all_of = " << kind_name(p.kind) << ":" << scope_name(p.scope) << ":"
                << p.needle << "\n";
        for (const Pattern& p : r.any_of)
            out << "any_of = " << kind_name(p.kind) << ":" << scope_name(p.scope) << ":"
                << p.needle << "\n";
        for (const Pattern& p : r.none_of)
            out << "none_of = " << kind_name(p.kind) << ":" << scope_name(p.scope) << ":"
                << p.needle << "\n";
    }
    if (!out) throw Error("error while writing rule file: " + path.string());
}

RuleSet load_rules(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read rule file: " + path.string());

    RuleSet rs;
    DetectionRule current;
    bool in_rule = false;
    bool have_family = false;
    std::string line;
    std::size_t lineno = 0;

    auto flush = [&]() {
        if (!in_rule) return;
        if (!have_family)
            throw Error(path.string() + ": rule " + current.code + " has no family line");
        rs.rules.push_back(current);
        current = DetectionRule{};
        have_family = false;
    };

    while (std::getline(in, line)) {
        ++lineno;
        std::string where = path.string() + ":" + std::to_string(lineno);
        std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']' || t.rfind("[rule ", 0) != 0)
                throw Error(where + ": expected '[rule <CODE>]', found '" + t + "'");
            flush();
            in_rule = true;
            current.code = trim(t.substr(6, t.size() - 7));
            if (current.code.empty()) throw Error(where + ": empty rule code");
            continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw Error(where + ": expected 'key = value', found '" + t + "'");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (!in_rule) {
            if (key == "version") {
                rs.version = value;
                continue;
            }
            throw Error(where + ": key '" + key + "' outside a [rule] section");
        }
        if (key == "name") {
            current.name = value;
        } else if (key == "family") {
            current.family = parse_family(value);
            have_family = true;
        } else if (key == "polarity") {
            if (value == "presence") current.polarity = Polarity::presence;
            else if (value == "absence") current.polarity = Polarity::absence;
            else throw Error(where + ": polarity must be presence or absence");
        } else if (key == "all_of") {
            current.all_of.push_back(parse_pattern_spec(value, where));
        } else if (key == "any_of") {
            current.any_of.push_back(parse_pattern_spec(value, where));
        } else if (key == "none_of") {
            current.none_of.push_back(parse_pattern_spec(value, where));
        } else {
            throw Error(where + ": unknown key '" + key + "'");
        }
    }
    flush();
    validate_rules(rs);
    return rs;
}

}  // namespace nftscan
