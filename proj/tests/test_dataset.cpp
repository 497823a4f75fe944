#include <doctest.h>

#include "helpers.hpp"
#include "nftscan/dataset.hpp"

using namespace nftscan;
using testutil::TempDir;
using testutil::random_dataset;
using testutil::read_file;
using testutil::write_file;

TEST_CASE("read_labels parses the sample-table row shape") {
    TempDir tmp("labels");
    write_file(tmp.path / "l.csv",
               "File,A1,A2,A3,A4,A5,A6,Risk\n"
               "addcfaaabdbcbfccf.sol,False,False,True,True,False,False,1\n"
               "Bccffcaccbcf.sol,False,False,False,False,False,False,0\n");
    LabelTable t = read_labels(tmp.path / "l.csv", Family::rmp);
    CHECK(t.entries.at("addcfaaabdbcbfccf") == 1);
    CHECK(t.entries.at("bccffcaccbcf") == 0);
}

TEST_CASE("read_labels accepts the label-only shape") {
    TempDir tmp("labels2");
    write_file(tmp.path / "l.csv", "File,Risk\na.sol,1\nb.sol,0\n");
    LabelTable t = read_labels(tmp.path / "l.csv", Family::um);
    CHECK(t.entries.size() == 2);
}

TEST_CASE("label outside 0/1 is an error with the row number") {
    TempDir tmp("badlabel");
    write_file(tmp.path / "l.csv", "File,Risk\na.sol,1\nb.sol,2\n");
    try {
        read_labels(tmp.path / "l.csv", Family::um);
        FAIL("expected a row error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find(":3") != std::string::npos);
    }
}

TEST_CASE("header/family arity mismatch is an error") {
    TempDir tmp("badheader");
    write_file(tmp.path / "l.csv", "File,A1,A2,A3,A4,A5,A6,Risk\na.sol,False,False,False,False,False,False,0\n");
    CHECK_THROWS_AS(read_labels(tmp.path / "l.csv", Family::um), nftscan::Error);  // UM wants C1..C8
}

TEST_CASE("feature csv round-trips bit for bit") {
    SplitMix64 rng(11);
    LabeledDataset ds = random_dataset(Family::erc721r, 20, rng);
    TempDir tmp("roundtrip");
    write_feature_csv(ds, tmp.path / "d.csv");
    LabeledDataset back = read_feature_csv(tmp.path / "d.csv", Family::erc721r);
    CHECK(back == ds);

    // header and cell conventions
    std::string text = read_file(tmp.path / "d.csv");
    CHECK(text.rfind("File,B1,B2,B3,B4,B5,B6,B7,B8,Risk\n", 0) == 0);
    CHECK(text.back() == '\n');
    CHECK(text.find("True") != std::string::npos);
    CHECK(text.find("False") != std::string::npos);

    // a second write is byte-identical
    write_feature_csv(back, tmp.path / "d2.csv");
    CHECK(read_file(tmp.path / "d2.csv") == text);
}

TEST_CASE("feature_csv_family infers the family from the header") {
    TempDir tmp("infer");
    SplitMix64 rng(3);
    for (Family f : all_families) {
        LabeledDataset ds = random_dataset(f, 4, rng);
        write_feature_csv(ds, tmp.path / "x.csv");
        CHECK(feature_csv_family(tmp.path / "x.csv") == f);
    }
}

TEST_CASE("stratified split honors per-class rounding") {
    SplitMix64 rng(5);
    LabeledDataset ds = random_dataset(Family::rmp, 10, rng);
    for (std::size_t i = 0; i < ds.samples.size(); ++i) ds.samples[i].label = i < 5 ? 1 : 0;

    auto [train, test] = split_dataset(ds, 0.2, 99);
    CHECK(test.size() == 2);
    int pos = 0;
    for (const Sample& s : test.samples) pos += s.label;
    CHECK(pos == 1);
    CHECK(train.size() + test.size() == ds.size());
}

TEST_CASE("split is deterministic and a true partition") {
    SplitMix64 rng(6);
    LabeledDataset ds = random_dataset(Family::um, 8, rng);
    for (std::size_t i = 0; i < ds.samples.size(); ++i) ds.samples[i].label = i % 2;

    auto [train1, test1] = split_dataset(ds, 0.5, 42);
    auto [train2, test2] = split_dataset(ds, 0.5, 42);
    CHECK(train1 == train2);
    CHECK(test1 == test2);
    CHECK(test1.size() == 4);

    int pos = 0;
    for (const Sample& s : test1.samples) pos += s.label;
    CHECK(pos == 2);

    std::set<std::string> seen;
    for (const Sample& s : train1.samples) seen.insert(s.id);
    for (const Sample& s : test1.samples) CHECK(seen.insert(s.id).second);
    CHECK(seen.size() == ds.size());
}

TEST_CASE("a class with fewer than 2 samples cannot stratify") {
    SplitMix64 rng(7);
    LabeledDataset ds = random_dataset(Family::um, 5, rng);
    for (auto& s : ds.samples) s.label = 0;
    ds.samples[0].label = 1;
    CHECK_THROWS_AS(split_dataset(ds, 0.2, 1), nftscan::Error);
}

TEST_CASE("stratified folds cover every sample and pair classes evenly") {
    SplitMix64 rng(8);
    LabeledDataset ds = random_dataset(Family::pb, 30, rng);
    for (std::size_t i = 0; i < ds.samples.size(); ++i) ds.samples[i].label = i % 2;
    auto fold_of = stratified_folds(ds, 5, 17);
    REQUIRE(fold_of.size() == ds.size());
    std::vector<int> sizes(5, 0);
    for (int f : fold_of) {
        REQUIRE(f >= 0);
        REQUIRE(f < 5);
        sizes[static_cast<std::size_t>(f)]++;
    }
    for (int s : sizes) CHECK(s == 6);
    CHECK(stratified_folds(ds, 5, 17) == fold_of);
}
