#include "nftscan/scan.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace nftscan {

namespace {

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

std::size_t skip_ws(std::string_view t, std::size_t i) {
    while (i < t.size() && std::isspace(static_cast<unsigned char>(t[i]))) ++i;
    return i;
}

std::string_view read_identifier(std::string_view t, std::size_t i) {
    if (i >= t.size() || !is_ident_start(t[i])) return {};
    std::size_t j = i;
    while (j < t.size() && is_word_char(t[j])) ++j;
    return t.substr(i, j - i);
}

// Keywords that may appear between the parameter list and the body and are
// not user modifiers.
bool is_header_keyword(std::string_view word) {
    static constexpr std::array<std::string_view, 12> kw = {
        "view",    "pure",    "payable",  "virtual",  "override", "returns",
        "memory",  "storage", "calldata", "constant", "immutable", "function"};
    return std::find(kw.begin(), kw.end(), word) != kw.end();
}

Visibility visibility_from_word(std::string_view word) {
    if (word == "public") return Visibility::public_;
    if (word == "external") return Visibility::external_;
    if (word == "internal") return Visibility::internal_;
    if (word == "private") return Visibility::private_;
    return Visibility::unspecified;
}

// Finds the next word-bounded occurrence of `word` at or after `from`.
std::size_t find_keyword(std::string_view t, std::string_view word, std::size_t from) {
    std::size_t i = from;
    while ((i = t.find(word, i)) != std::string_view::npos) {
        bool left_ok = i == 0 || !is_word_char(t[i - 1]);
        std::size_t end = i + word.size();
        bool right_ok = end >= t.size() || !is_word_char(t[end]);
        if (left_ok && right_ok) return i;
        i += 1;
    }
    return std::string_view::npos;
}

}  // namespace

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

std::string_view visibility_name(Visibility v) {
    switch (v) {
    case Visibility::public_: return "public";
    case Visibility::external_: return "external";
    case Visibility::internal_: return "internal";
    case Visibility::private_: return "private";
    case Visibility::unspecified: return "unspecified";
    }
    return "?";
}

ScanResult extract_functions(std::string_view t) {
    ScanResult result;
    std::size_t pos = 0;
    while (pos < t.size()) {
        std::size_t f = find_keyword(t, "function", pos);
        std::size_t c = find_keyword(t, "constructor", pos);
        std::size_t kw = std::min(f, c);
        if (kw == std::string_view::npos) break;
        bool is_ctor = (kw == c && c < f);
        std::size_t kw_len = is_ctor ? 11 : 8;

        FunctionSpan span;
        span.signature_begin = kw;
        std::size_t i = skip_ws(t, kw + kw_len);
        if (!is_ctor) {
            std::string_view name = read_identifier(t, i);
            span.name.assign(name);
            i += name.size();
            i = skip_ws(t, i);
        }
        if (i >= t.size() || t[i] != '(') {
            // keyword not followed by a declaration shape; skip it
            pos = kw + kw_len;
            continue;
        }
        // parameter list: balanced parens
        std::size_t params_open = i;
        int depth = 0;
        std::size_t j = i;
        for (; j < t.size(); ++j) {
            if (t[j] == '(') ++depth;
            else if (t[j] == ')' && --depth == 0) break;
        }
        if (j >= t.size()) {
            result.diagnostics.push_back("unbalanced parameter list at offset " +
                                         std::to_string(params_open));
            break;
        }
        span.param_text.assign(t.substr(params_open + 1, j - params_open - 1));
        i = j + 1;

        // header: modifiers/visibility until `{` or `;` at paren depth 0
        depth = 0;
        while (i < t.size()) {
            char ch = t[i];
            if (ch == '(') {
                ++depth;
                ++i;
            } else if (ch == ')') {
                --depth;
                ++i;
            } else if (depth == 0 && (ch == '{' || ch == ';')) {
                break;
            } else if (depth == 0 && is_ident_start(ch)) {
                std::string_view word = read_identifier(t, i);
                Visibility vis = visibility_from_word(word);
                if (vis != Visibility::unspecified) {
                    if (span.visibility == Visibility::unspecified) span.visibility = vis;
                } else if (!is_header_keyword(word)) {
                    span.modifiers.emplace_back(word);
                }
                i += word.size();
            } else {
                ++i;
            }
        }
        span.signature_end = i;
        if (i >= t.size()) {
            result.diagnostics.push_back("function header runs to end of file at offset " +
                                         std::to_string(kw));
            result.functions.push_back(std::move(span));
            break;
        }
        if (t[i] == ';') {
            span.body_begin = span.body_end = i;  // declaration without body
            pos = i + 1;
            result.functions.push_back(std::move(span));
            continue;
        }
        // body: balanced braces starting at `{`
        std::size_t body_open = i;
        depth = 0;
        for (j = i; j < t.size(); ++j) {
            if (t[j] == '{') ++depth;
            else if (t[j] == '}' && --depth == 0) break;
        }
        if (j >= t.size()) {
            result.diagnostics.push_back("unbalanced braces in function body at offset " +
                                         std::to_string(body_open));
            span.body_begin = body_open;
            span.body_end = t.size();
            result.functions.push_back(std::move(span));
            break;
        }
        span.body_begin = body_open;
        span.body_end = j + 1;
        pos = j + 1;  // Solidity has no nested functions; resume past the body
        result.functions.push_back(std::move(span));
    }
    return result;
}

std::vector<std::size_t> identifier_offsets(std::string_view text, std::string_view alternatives,
                                            bool require_call) {
    std::vector<std::size_t> offsets;
    std::size_t start = 0;
    while (start <= alternatives.size()) {
        std::size_t bar = alternatives.find('|', start);
        std::string_view needle = alternatives.substr(
            start, bar == std::string_view::npos ? std::string_view::npos : bar - start);
        if (!needle.empty()) {
            std::size_t i = 0;
            while ((i = find_keyword(text, needle, i)) != std::string_view::npos) {
                bool ok = true;
                if (require_call) {
                    std::size_t after = skip_ws(text, i + needle.size());
                    ok = after < text.size() && text[after] == '(';
                }
                if (ok) offsets.push_back(i);
                i += 1;
            }
        }
        if (bar == std::string_view::npos) break;
        start = bar + 1;
    }
    std::sort(offsets.begin(), offsets.end());
    offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());
    return offsets;
}

bool dense_contains(std::string_view text, std::string_view needle) {
    std::string dense_text, dense_needle;
    dense_text.reserve(text.size());
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) dense_text.push_back(c);
    for (char c : needle)
        if (!std::isspace(static_cast<unsigned char>(c))) dense_needle.push_back(c);
    if (dense_needle.empty()) return false;
    return dense_text.find(dense_needle) != std::string::npos;
}

std::vector<std::size_t> assignment_offsets(std::string_view text,
                                            std::string_view alternatives) {
    std::vector<std::size_t> candidates;
    if (alternatives.empty()) {
        for (std::size_t i = 0; i < text.size(); ++i) {
            if (is_ident_start(text[i]) && (i == 0 || !is_word_char(text[i - 1])))
                candidates.push_back(i);
        }
    } else {
        candidates = identifier_offsets(text, alternatives, /*require_call=*/false);
    }

    std::vector<std::size_t> offsets;
    for (std::size_t at : candidates) {
        std::size_t i = at;
        while (i < text.size() && is_word_char(text[i])) ++i;
        i = skip_ws(text, i);
        // allow indexed targets: balances[msg.sender][id] = ...
        while (i < text.size() && text[i] == '[') {
            int depth = 0;
            for (; i < text.size(); ++i) {
                if (text[i] == '[') ++depth;
                else if (text[i] == ']' && --depth == 0) { ++i; break; }
            }
            i = skip_ws(text, i);
        }
        if (i >= text.size()) continue;
        char c = text[i];
        bool assigns = false;
        if (c == '=') {
            assigns = i + 1 >= text.size() || (text[i + 1] != '=' && text[i + 1] != '>');
        } else if ((c == '+' || c == '-' || c == '*' || c == '/' || c == '%' || c == '&' ||
                    c == '|' || c == '^') &&
                   i + 1 < text.size() && text[i + 1] == '=') {
            assigns = true;  // compound assignment
        }
        if (assigns) offsets.push_back(at);
    }
    return offsets;
}

namespace {

bool match_one(std::string_view haystack, const Pattern& p) {
    switch (p.kind) {
    case PatternKind::identifier:
        return !identifier_offsets(haystack, p.needle, false).empty();
    case PatternKind::call:
        return !identifier_offsets(haystack, p.needle, true).empty();
    case PatternKind::substring: {
        std::size_t start = 0;
        while (start <= p.needle.size()) {
            std::size_t bar = p.needle.find('|', start);
            std::string_view alt = std::string_view(p.needle).substr(
                start, bar == std::string_view::npos ? std::string_view::npos : bar - start);
            if (!alt.empty() && dense_contains(haystack, alt)) return true;
            if (bar == std::string_view::npos) break;
            start = bar + 1;
        }
        return false;
    }
    }
    return false;
}

}  // namespace

bool match_pattern_in(std::string_view normalized_text, const FunctionSpan* fn,
                      const Pattern& pattern) {
    switch (pattern.scope) {
    case PatternScope::file: return match_one(normalized_text, pattern);
    case PatternScope::function_body:
        if (!fn || !fn->has_body()) return false;
        return match_one(normalized_text.substr(fn->body_begin, fn->body_end - fn->body_begin),
                         pattern);
    case PatternScope::function_signature:
        if (!fn) return false;
        return match_one(
            normalized_text.substr(fn->signature_begin, fn->signature_end - fn->signature_begin),
            pattern);
    }
    return false;
}

bool match_pattern(const ContractSource& source, const std::vector<FunctionSpan>& spans,
                   const Pattern& pattern) {
    if (pattern.scope == PatternScope::file)
        return match_pattern_in(source.normalized_text, nullptr, pattern);
    for (const FunctionSpan& fn : spans) {
        if (match_pattern_in(source.normalized_text, &fn, pattern)) return true;
    }
    return false;
}

}  // namespace nftscan
