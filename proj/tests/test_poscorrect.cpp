#include <doctest.h>

#include <cmath>
#include <random>

#include "juju/parse.hpp"
#include "juju/poscorrect.hpp"

using namespace juju;

namespace {

poscorrect::EmbeddingTable tiny_table() {
    poscorrect::EmbeddingTable table(2);
    table.insert("a", {1.0, 0.0});
    table.insert("b", {0.0, 1.0});
    return table;
}

// Two linearly separable classes in trigram-embedding space.
std::vector<poscorrect::TrigramSample> separable_samples(poscorrect::EmbeddingTable& table,
                                                         std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> noise(0.0, 0.3);
    std::vector<poscorrect::TrigramSample> samples;
    for (std::size_t i = 0; i < n; ++i) {
        bool pos = i % 2 == 0;
        std::string w = "w" + std::to_string(i);
        double base = pos ? 2.0 : -2.0;
        table.insert(w, {base + noise(rng), base + noise(rng), noise(rng),
                         base + noise(rng)});
        samples.push_back({"pad", w, "pad", pos ? "JJ" : "VBD"});
    }
    return samples;
}

}  // namespace

TEST_CASE("featurize") {
    auto table = tiny_table();
    SUBCASE("concatenation") {
        CHECK(poscorrect::featurize("a", "b", "a", table) ==
              std::vector<double>{1, 0, 0, 1, 1, 0});
    }
    SUBCASE("OOV words map to zero") {
        CHECK(poscorrect::featurize("x", "y", "z", table) ==
              std::vector<double>(6, 0.0));
    }
    SUBCASE("length is 3d") {
        poscorrect::EmbeddingTable big(300);
        CHECK(poscorrect::featurize("x", "y", "z", big).size() == 900);
    }
    SUBCASE("linear in each slot") {
        poscorrect::EmbeddingTable scaled(2);
        scaled.insert("a", {3.0, 0.0});
        scaled.insert("b", {0.0, 3.0});
        auto f1 = poscorrect::featurize("a", "b", "a", table);
        auto f3 = poscorrect::featurize("a", "b", "a", scaled);
        for (std::size_t i = 0; i < f1.size(); ++i)
            CHECK(f3[i] == doctest::Approx(3.0 * f1[i]));
    }
}

TEST_CASE("train on separable data") {
    poscorrect::EmbeddingTable table(4);
    auto samples = separable_samples(table, 200, 3);
    auto [clf, result] = poscorrect::LinearPosClassifier::train(samples, table);
    CHECK(result.train_accuracy >= 0.95);
    CHECK_FALSE(result.degenerate);

    SUBCASE("prediction is deterministic and order-independent") {
        auto reversed = samples;
        std::reverse(reversed.begin(), reversed.end());
        auto [clf2, r2] = poscorrect::LinearPosClassifier::train(reversed, table);
        // same seed, same sample multiset: identical accuracies
        CHECK(result.train_accuracy == r2.train_accuracy);
        auto f = poscorrect::featurize("pad", "w0", "pad", table);
        CHECK(clf.predict(f) == clf2.predict(f));
    }
}

TEST_CASE("train degenerate single-class data") {
    auto table = tiny_table();
    std::vector<poscorrect::TrigramSample> samples(10, {"a", "b", "a", "NN"});
    auto [clf, result] = poscorrect::LinearPosClassifier::train(samples, table);
    CHECK(result.degenerate);
    CHECK(result.train_accuracy == 1.0);
}

TEST_CASE("model save/load round-trip") {
    poscorrect::EmbeddingTable table(4);
    auto samples = separable_samples(table, 100, 5);
    auto [clf, result] = poscorrect::LinearPosClassifier::train(samples, table);
    const std::string path = "/tmp/juju_test_model.txt";
    clf.save(path);
    auto loaded = poscorrect::LinearPosClassifier::load(path);
    for (const auto& s : samples) {
        auto f = poscorrect::featurize(s.left, s.center, s.right, table);
        CHECK(clf.predict(f) == loaded.predict(f));
    }
    std::remove(path.c_str());
}

TEST_CASE("correct_tags") {
    // classifier that maps the "that said sectors" trigram to JJ
    poscorrect::EmbeddingTable table(2);
    table.insert("that", {1.0, 0.0});
    table.insert("said", {0.5, 0.5});
    table.insert("sectors", {0.0, 1.0});
    table.insert("works", {-1.0, -1.0});
    std::vector<poscorrect::TrigramSample> samples;
    for (int i = 0; i < 20; ++i) {
        samples.push_back({"that", "said", "sectors", "JJ"});
        samples.push_back({"said", "works", "sectors", "VBZ"});
    }
    auto [clf, result] = poscorrect::LinearPosClassifier::train(samples, table);
    REQUIRE(result.train_accuracy == 1.0);

    auto tree = parse::parse_bracketed(
        "(S (NP (DT that)) (VP (VBD said) (NP (NNS sectors))))");

    SUBCASE("verb tag corrected from trigram") {
        auto corrections = poscorrect::correct_tags(tree, clf, table);
        REQUIRE(corrections.size() == 1);
        CHECK(corrections[0].token_index == 1);
        CHECK(corrections[0].old_tag == "VBD");
        CHECK(corrections[0].new_tag == "JJ");
        CHECK(parse::pos_sequence(tree)[1].second == "JJ");
    }
    SUBCASE("idempotent") {
        poscorrect::correct_tags(tree, clf, table);
        auto serialized = parse::serialize(tree);
        auto again = poscorrect::correct_tags(tree, clf, table);
        CHECK(again.empty());
        CHECK(parse::serialize(tree) == serialized);
    }
    SUBCASE("surfaces unchanged, only tags differ") {
        auto before = parse::pos_sequence(tree);
        poscorrect::correct_tags(tree, clf, table);
        auto after = parse::pos_sequence(tree);
        REQUIRE(before.size() == after.size());
        for (std::size_t i = 0; i < before.size(); ++i)
            CHECK(before[i].first == after[i].first);
    }
    SUBCASE("tree with no verbs is untouched") {
        auto nv = parse::parse_bracketed("(NP (DT a) (NN layer))");
        CHECK(poscorrect::correct_tags(nv, clf, table).empty());
    }
}
