#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "nftscan/corpus.hpp"

namespace nftscan {

enum class Visibility { public_, external_, internal_, private_, unspecified };

std::string_view visibility_name(Visibility v);

// One function (or constructor) found by the lexical scan. Ranges index into
// normalized_text; body_range includes the braces and is empty for bodyless
// declarations (interfaces, abstract signatures).
struct FunctionSpan {
    std::string name;  // empty for constructor/fallback/receive
    Visibility visibility = Visibility::unspecified;
    std::vector<std::string> modifiers;  // user modifiers, e.g. onlyOwner
    std::size_t body_begin = 0, body_end = 0;
    std::size_t signature_begin = 0, signature_end = 0;  // keyword up to body/semicolon
    std::string param_text;

    bool has_body() const { return body_end > body_begin; }
};

struct ScanResult {
    std::vector<FunctionSpan> functions;
    std::vector<std::string> diagnostics;
};

// Expects normalized text (comments/strings blanked). Never throws; unbalanced
// input yields best-effort spans plus a diagnostic.
ScanResult extract_functions(std::string_view normalized_text);

enum class PatternKind { identifier, call, substring };
enum class PatternScope { file, function_body, function_signature };

// A needle may hold `|`-separated alternatives; the pattern matches if any
// alternative does. `identifier` matches at word boundaries ([A-Za-z0-9_$]),
// `call` additionally requires a `(` after optional whitespace, and
// `substring` matches with all whitespace removed from both sides, so
// needles like `proxy=` or `require(msg.sender` are spacing-insensitive.
struct Pattern {
    PatternKind kind = PatternKind::identifier;
    PatternScope scope = PatternScope::file;
    std::string needle;

    bool operator==(const Pattern&) const = default;
};

bool match_pattern(const ContractSource& source, const std::vector<FunctionSpan>& spans,
                   const Pattern& pattern);

// Single-scope variant used by the rule engine when patterns are bound to one
// function; `function_scope` may be null for file scope.
bool match_pattern_in(std::string_view normalized_text, const FunctionSpan* function_scope,
                      const Pattern& pattern);

// --- offset-level helpers (substrate for order-sensitive detectors) ---

bool is_word_char(char c);

// Offsets of word-bounded occurrences of any `|`-alternative within text;
// require_call demands `(` after optional whitespace.
std::vector<std::size_t> identifier_offsets(std::string_view text, std::string_view alternatives,
                                            bool require_call);

// True if needle occurs in text once all whitespace is removed from both.
bool dense_contains(std::string_view text, std::string_view needle);

// Offsets (of the identifier) where an identifier from `alternatives` —
// or any identifier at all when `alternatives` is empty — is assigned to:
// identifier, optional [index] chains, then `=`, `+=`, `-=`, `*=` ... but not
// `==`, `<=`, `>=`, `!=`, `=>`.
std::vector<std::size_t> assignment_offsets(std::string_view text,
                                            std::string_view alternatives);

}  // namespace nftscan
