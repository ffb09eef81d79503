#include <doctest.h>

#include <cmath>
#include <fstream>

#include "juju/scoring.hpp"

using namespace juju;

TEST_CASE("porter_stem: canonical pairs") {
    CHECK(scoring::porter_stem("caresses") == "caress");
    CHECK(scoring::porter_stem("ponies") == "poni");
    CHECK(scoring::porter_stem("cats") == "cat");
    CHECK(scoring::porter_stem("agreed") == "agre");
    CHECK(scoring::porter_stem("plastered") == "plaster");
    CHECK(scoring::porter_stem("motoring") == "motor");
    CHECK(scoring::porter_stem("conflated") == "conflat");
    CHECK(scoring::porter_stem("hopping") == "hop");
    CHECK(scoring::porter_stem("happy") == "happi");
    CHECK(scoring::porter_stem("relational") == "relat");
    CHECK(scoring::porter_stem("generalization") == "gener");
    CHECK(scoring::porter_stem("oscillation") == "oscil");
    CHECK(scoring::porter_stem("triplicate") == "triplic");
    CHECK(scoring::porter_stem("dependent") == "depend");
    CHECK(scoring::porter_stem("probate") == "probat");
    CHECK(scoring::porter_stem("controlling") == "control");
    CHECK(scoring::porter_stem("rolling") == "roll");
    // distinct surface forms that must conflate
    CHECK(scoring::porter_stem("curated") == "curat");
    CHECK(scoring::porter_stem("curation") == "curat");
    // words of length <= 2 are left alone
    CHECK(scoring::porter_stem("as") == "as");
    CHECK(scoring::porter_stem("is") == "is");
    CHECK(scoring::porter_stem("a") == "a");
}

TEST_CASE("porter_stem: full vocabulary fixture") {
    std::ifstream in(std::string(JUJU_SOURCE_DIR) + "/tests/fixtures/porter_vocab.txt");
    REQUIRE(in);
    std::string line;
    std::size_t total = 0, mismatches = 0;
    std::string first_mismatch;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto tab = line.find('\t');
        REQUIRE(tab != std::string::npos);
        std::string word = line.substr(0, tab);
        std::string expected = line.substr(tab + 1);
        std::string got = scoring::porter_stem(word);
        ++total;
        if (got != expected) {
            ++mismatches;
            if (first_mismatch.empty())
                first_mismatch = word + " -> " + got + " (want " + expected + ")";
        }
    }
    CHECK(total > 2000);
    INFO("first mismatch: ", first_mismatch);
    CHECK(mismatches == 0);
}

TEST_CASE("porter_stem: idempotent on its own output") {
    for (const char* w : {"generalization", "controlling", "relational", "curated",
                          "oscillation", "happiness", "utilization"}) {
        auto once = scoring::porter_stem(w);
        CHECK(scoring::porter_stem(once) == once);
    }
}

namespace {

spectree::WordProfile profile_of(std::vector<spectree::Occurrence> occs,
                                 std::size_t count, std::size_t first_seen) {
    spectree::WordProfile p;
    for (const auto& o : occs) {
        p.triples.insert(o);
        auto it = p.per_claim.find(o.cd);  // claim key == cd in these fixtures
        if (it == p.per_claim.end() || o.nd > it->second.first)
            p.per_claim[o.cd] = {o.nd, o.cd};
    }
    p.count = count;
    p.first_seen = first_seen;
    return p;
}

}  // namespace

TEST_CASE("aggregate_stems") {
    spectree::OccurrenceProfile profile;
    profile["curated"] = profile_of({{1, 2, 0}}, 3, 0);
    profile["curation"] = profile_of({{2, 1, 1}}, 1, 5);
    profile["layer"] = profile_of({{0, 3, 0}}, 2, 2);

    auto records = scoring::aggregate_stems(profile);
    REQUIRE(records.size() == 2);
    const auto& curat = records.at("curat");
    CHECK(curat.profile == std::set<spectree::Occurrence>{{1, 2, 0}, {2, 1, 1}});
    CHECK(curat.word_counts.at("curated") == 3);
    CHECK(curat.word_counts.at("curation") == 1);
    CHECK(curat.representative == "curated");  // most occurrences wins
    CHECK(curat.first_seen == 0);              // earliest arrival across the group
    CHECK(curat.per_claim.size() == 2);

    SUBCASE("representative tie broken by earliest arrival") {
        profile["curated"].count = 1;
        auto r = scoring::aggregate_stems(profile);
        CHECK(r.at("curat").representative == "curated");  // first_seen 0 beats 5
    }
}

TEST_CASE("score_stem hand values") {
    scoring::StemRecord rec;
    SUBCASE("older variant, single root occurrence") {
        rec.profile = {{0, 3, 0}};
        auto p = scoring::ScoringParams::defaults(scoring::Variant::JUJU05);
        CHECK(scoring::score_stem(rec, p) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("older variant, two occurrences") {
        rec.profile = {{1, 1, 0}, {2, 1, 1}};
        auto p = scoring::ScoringParams::defaults(scoring::Variant::JUJU05);
        // exp(1/2) + exp(2/3 + 1)
        CHECK(scoring::score_stem(rec, p) == doctest::Approx(6.9432113).epsilon(1e-6));
    }
    SUBCASE("newer variant uses per-claim max depth") {
        rec.per_claim = {{7, {2, 1}}};  // one claim: max nd 2, cd 1
        auto p = scoring::ScoringParams::defaults(scoring::Variant::JUJU06);
        // exp(1*2 + 2*1) = e^4
        CHECK(scoring::score_stem(rec, p) == doctest::Approx(std::exp(4.0)).epsilon(1e-12));
    }
    SUBCASE("newer variant sums across claims") {
        rec.per_claim = {{1, {0, 0}}, {2, {1, 1}}};
        auto p = scoring::ScoringParams::defaults(scoring::Variant::JUJU06);
        CHECK(scoring::score_stem(rec, p) ==
              doctest::Approx(1.0 + std::exp(3.0)).epsilon(1e-12));
    }
    SUBCASE("monotonic in node depth") {
        scoring::StemRecord shallow, deep;
        shallow.profile = {{1, 2, 0}};
        deep.profile = {{2, 1, 0}};
        auto p = scoring::ScoringParams::defaults(scoring::Variant::JUJU05);
        CHECK(scoring::score_stem(deep, p) > scoring::score_stem(shallow, p));
    }
    SUBCASE("monotonic in claim depth") {
        scoring::StemRecord root_claim, deep_claim;
        root_claim.per_claim = {{1, {1, 0}}};
        deep_claim.per_claim = {{1, {1, 3}}};
        auto p = scoring::ScoringParams::defaults(scoring::Variant::JUJU06);
        CHECK(scoring::score_stem(deep_claim, p) > scoring::score_stem(root_claim, p));
    }
}

namespace {

std::map<std::string, scoring::StemRecord> toy_records() {
    std::map<std::string, scoring::StemRecord> records;
    const char* names[] = {"alpha", "beta", "gamma", "delta", "epsilon"};
    for (int i = 0; i < 5; ++i) {
        scoring::StemRecord rec;
        rec.stem = names[i];
        rec.representative = names[i];
        rec.profile = {{i, 1, 0}};
        rec.per_claim = {{0, {i, 0}}};
        rec.first_seen = static_cast<std::size_t>(i);
        records[names[i]] = rec;
    }
    return records;
}

}  // namespace

TEST_CASE("extract_keywords") {
    auto records = toy_records();
    auto params = scoring::ScoringParams::defaults(scoring::Variant::JUJU06);

    SUBCASE("scores normalize to one over all stems") {
        auto list = scoring::extract_keywords(records, params, 100);
        REQUIRE(list.keywords.size() == 5);
        double sum = 0;
        for (const auto& k : list.keywords) sum += k.score;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(list.total_stems == 5);
    }
    SUBCASE("descending order, deeper stems first here") {
        auto list = scoring::extract_keywords(records, params, 100);
        for (std::size_t i = 1; i < list.keywords.size(); ++i)
            CHECK(list.keywords[i - 1].score >= list.keywords[i].score);
        CHECK(list.keywords.front().word == "epsilon");  // largest max depth
    }
    SUBCASE("truncation keeps the top of the full ranking") {
        auto full = scoring::extract_keywords(records, params, 100);
        auto top2 = scoring::extract_keywords(records, params, 2);
        REQUIRE(top2.keywords.size() == 2);
        CHECK(top2.total_stems == 5);
        for (std::size_t i = 0; i < 2; ++i) {
            CHECK(top2.keywords[i].word == full.keywords[i].word);
            // normalization happens before truncation, so scores match too
            CHECK(top2.keywords[i].score == full.keywords[i].score);
        }
    }
    SUBCASE("tied scores fall back to arrival order") {
        std::map<std::string, scoring::StemRecord> tied;
        for (const char* name : {"zz", "aa", "mm"}) {
            scoring::StemRecord rec;
            rec.stem = name;
            rec.representative = name;
            rec.per_claim = {{0, {1, 0}}};
            rec.first_seen = name[0] == 'z' ? 0 : name[0] == 'a' ? 1 : 2;
            tied[name] = rec;
        }
        auto list = scoring::extract_keywords(tied, params, 100);
        REQUIRE(list.keywords.size() == 3);
        CHECK(list.keywords[0].word == "zz");
        CHECK(list.keywords[1].word == "aa");
        CHECK(list.keywords[2].word == "mm");
    }
    SUBCASE("empty input") {
        auto list = scoring::extract_keywords({}, params, 100);
        CHECK(list.keywords.empty());
        CHECK(list.total_stems == 0);
    }
}

TEST_CASE("keyword_text_ratio") {
    scoring::KeywordList list;
    list.keywords.resize(25);
    list.total_stems = 25;
    CHECK(scoring::keyword_text_ratio(list, 100) == doctest::Approx(0.25));
    CHECK(scoring::keyword_text_ratio(list, 0) == 0.0);
}
