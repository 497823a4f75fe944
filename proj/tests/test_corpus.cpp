#include <doctest.h>

#include "helpers.hpp"
#include "nftscan/corpus.hpp"

using namespace nftscan;
using testutil::TempDir;
using testutil::write_file;

TEST_CASE("normalize blanks line comments in place") {
    auto r = normalize_source("a; // note\nb;");
    CHECK(r.text == "a;        \nb;");
    CHECK(r.warnings.empty());
}

TEST_CASE("normalize blanks block comments but keeps newlines") {
    auto r = normalize_source("x /* one\ntwo */ y");
    CHECK(r.text == "x       \n       y");
    CHECK(line_count(r.text) == 2);
}

TEST_CASE("normalize blanks string interiors, keeps quotes") {
    auto r = normalize_source("x = \"mint\";");
    CHECK(r.text == "x = \"    \";");
    // a pattern scan for the quoted keyword must stop hitting
    CHECK(std::string_view("x = \"mint\";").find("mint") != std::string_view::npos);
    CHECK(r.text.find("mint") == std::string::npos);
}

TEST_CASE("normalize replaces non-ASCII with spaces and keeps the line count") {
    std::string cjk = "uint a; // \xE4\xBB\xA3\xE5\xB8\x81\nuint \xE5\xB8\x81x;\n";
    auto r = normalize_source(cjk);
    CHECK(line_count(r.text) == line_count(cjk));
    for (unsigned char c : r.text) CHECK((c == '\n' || c == '\t' || (c >= 0x20 && c <= 0x7E)));
}

TEST_CASE("unterminated block comment blanks to EOF with a warning") {
    auto r = normalize_source("a;\n/* open\nmore");
    CHECK(r.warnings.size() == 1);
    CHECK(r.text == "a;\n       \n    ");
}

TEST_CASE("unterminated string warns") {
    auto r = normalize_source("x = \"abc");
    CHECK(r.warnings.size() == 1);
}

TEST_CASE("normalize is idempotent and preserves line counts") {
    SplitMix64 rng(7);
    const char* snippets[] = {
        "contract C { // x\n uint a = 1; /* y */ string s = \"he//llo\"; }\n",
        "/* a\nb*/ x=\"\\\"q\\\"\"; // t\n",
        "\xE4\xB8\xAD\xE6\x96\x87 /*\xE6\xB3\xA8*/ '\\n' \n",
    };
    for (const char* s : snippets) {
        auto once = normalize_source(s);
        auto twice = normalize_source(once.text);
        CHECK(once.text == twice.text);
        CHECK(once.text.size() == std::string(s).size());
        CHECK(line_count(once.text) == line_count(s));
    }
    // random ASCII fuzz
    for (int it = 0; it < 50; ++it) {
        std::string s;
        for (int i = 0; i < 200; ++i) {
            const char* alphabet = "ab/*\"'\\\n ;{}=";
            s.push_back(alphabet[rng.below(13)]);
        }
        auto once = normalize_source(s);
        auto twice = normalize_source(once.text);
        CHECK(once.text == twice.text);
        CHECK(line_count(once.text) == line_count(s));
    }
}

TEST_CASE("load_corpus sorts by id and normalizes ids") {
    TempDir tmp("corpus");
    write_file(tmp.path / "B.sol", "contract B {}");
    write_file(tmp.path / "a.SOL", "contract A {}");
    write_file(tmp.path / "notes.txt", "ignored");
    auto sources = load_corpus(tmp.path);
    REQUIRE(sources.size() == 2);
    CHECK(sources[0].id == "a");
    CHECK(sources[1].id == "b");
}

TEST_CASE("duplicate ids are a load error naming both paths") {
    TempDir tmp("dupid");
    write_file(tmp.path / "x.sol", "contract X {}");
    write_file(tmp.path / "X.SOL", "contract X2 {}");
    try {
        load_corpus(tmp.path);
        FAIL("expected duplicate-id error");
    } catch (const Error& e) {
        std::string msg = e.what();
        CHECK(msg.find("x.sol") != std::string::npos);
        CHECK(msg.find("X.SOL") != std::string::npos);
    }
}

TEST_CASE("empty directory loads as an empty corpus") {
    TempDir tmp("empty");
    CHECK(load_corpus(tmp.path).empty());
}

TEST_CASE("ten generated files load with matching stems") {
    TempDir tmp("ten");
    std::vector<std::string> stems;
    for (int i = 0; i < 10; ++i) {
        std::string stem = "file" + std::to_string(i);
        stems.push_back(stem);
        write_file(tmp.path / (stem + ".sol"), "contract T {}");
    }
    std::sort(stems.begin(), stems.end());
    auto sources = load_corpus(tmp.path);
    REQUIRE(sources.size() == stems.size());
    for (std::size_t i = 0; i < stems.size(); ++i) CHECK(sources[i].id == stems[i]);
}

TEST_CASE("source ids drop the extension and lowercase") {
    CHECK(source_id_from_name("Acdbaafcbabcbs.sol") == "acdbaafcbabcbs");
    CHECK(source_id_from_name("X.SOL") == "x");
    CHECK(source_id_from_name("plain") == "plain");
}
