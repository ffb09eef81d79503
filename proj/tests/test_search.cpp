#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "juju/search.hpp"

using namespace juju;

namespace {

corpus::PatentDocument make_doc(const std::string& id, const std::string& text) {
    corpus::PatentDocument doc;
    doc.doc_id = id;
    doc.claims.push_back({1, text, {}, 0});
    return doc;
}

std::vector<corpus::PatentDocument> toy_corpus() {
    return {
        make_doc("D1", "An inkjet printhead comprising nozzles and resistors"),
        make_doc("D2", "A printhead with firing resistors and circuitry"),
        make_doc("D3", "Luminescence structure disposed on a substrate"),
        make_doc("D4", "Substrate with a carrier trap layer and nozzles"),
    };
}

// Straight BM25 reimplementation used as an oracle. Accumulates per document
// in query-term order, like the production path, so scores compare exactly.
std::vector<search::ScoredDoc> brute_force(const std::vector<corpus::PatentDocument>& docs,
                                           const search::Query& query,
                                           const search::Bm25Params& params) {
    std::vector<std::vector<std::string>> analyzed;
    for (const auto& d : docs) {
        std::string text;
        for (const auto& c : d.claims) text += c.text + " ";
        analyzed.push_back(search::analyze(text));
    }
    double avg = 0;
    for (const auto& a : analyzed) avg += static_cast<double>(a.size());
    avg /= static_cast<double>(docs.size());

    auto df = [&](const std::string& stem) {
        std::size_t n = 0;
        for (const auto& a : analyzed)
            if (std::find(a.begin(), a.end(), stem) != a.end()) ++n;
        return n;
    };
    auto tf = [&](std::size_t d, const std::string& stem) {
        return static_cast<double>(std::count(analyzed[d].begin(), analyzed[d].end(), stem));
    };

    std::vector<search::ScoredDoc> scored;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        if (docs[d].doc_id == query.topic_id) continue;
        double score = 0;
        bool touched = false;
        for (const auto& term : query.terms) {
            double f = tf(d, term.stem);
            if (f == 0) continue;
            touched = true;
            std::size_t n = df(term.stem);
            double N = static_cast<double>(docs.size());
            double idf = std::log(1.0 + (N - static_cast<double>(n) + 0.5) /
                                            (static_cast<double>(n) + 0.5));
            double norm_len = static_cast<double>(analyzed[d].size()) / avg;
            double w = idf * f * (params.k1 + 1.0) /
                       (f + params.k1 * (1.0 - params.b + params.b * norm_len));
            score += term.boost * w;
        }
        if (touched) scored.push_back({docs[d].doc_id, score});
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.doc_id < b.doc_id;
    });
    if (scored.size() > query.limit) scored.resize(query.limit);
    return scored;
}

std::vector<corpus::PatentDocument> random_corpus(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    const std::vector<std::string> vocab = {
        "printhead", "nozzle",  "resistor", "substrate", "layer",   "carrier",
        "trap",      "circuit", "signal",   "pulse",     "heating", "dipole",
        "sensor",    "filter",  "valve",    "membrane",  "coating", "wafer"};
    std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
    std::uniform_int_distribution<int> len(5, 40);
    std::vector<corpus::PatentDocument> docs;
    for (std::size_t i = 0; i < n; ++i) {
        std::string text;
        int L = len(rng);
        for (int j = 0; j < L; ++j) text += vocab[pick(rng)] + " ";
        docs.push_back(make_doc("R" + std::to_string(1000 + i), text));
    }
    return docs;
}

}  // namespace

TEST_CASE("analyze") {
    auto stems = search::analyze("The inkjet printheads (40) controlling nozzles");
    CHECK(stems == std::vector<std::string>{"inkjet", "printhead", "control", "nozzl"});
    // lowercasing happens before the stopword check
    CHECK(search::analyze("THE The the").empty());
    // numerals never survive analysis
    CHECK(search::analyze("40 100/200").empty());
}

TEST_CASE("index construction") {
    auto docs = toy_corpus();
    auto index = search::InvertedIndex::build(docs);
    CHECK(index.doc_count() == 4);

    SUBCASE("document frequency matches containment") {
        CHECK(index.document_frequency("printhead") == 2);
        CHECK(index.document_frequency("substrat") == 2);
        CHECK(index.document_frequency("nozzl") == 2);
        CHECK(index.document_frequency("missing") == 0);
        CHECK(index.postings("missing") == nullptr);
    }
    SUBCASE("postings are doc-ordered and tf-correct") {
        const auto* p = index.postings("nozzl");
        REQUIRE(p != nullptr);
        REQUIRE(p->size() == 2);
        CHECK((*p)[0].doc < (*p)[1].doc);
        for (const auto& post : *p) CHECK(post.tf == 1);
    }
    SUBCASE("vocabulary is sorted") {
        const auto& v = index.vocabulary();
        CHECK(std::is_sorted(v.begin(), v.end()));
    }
    SUBCASE("doc length sums match the postings") {
        for (std::uint32_t d = 0; d < index.doc_count(); ++d) {
            std::size_t total = 0;
            for (const auto& term : index.vocabulary()) {
                for (const auto& post : *index.postings(term))
                    if (post.doc == d) total += post.tf;
            }
            CHECK(total == index.doc_length(d));
        }
    }
    SUBCASE("fulltext field falls back to claims with a warning") {
        std::vector<std::string> warnings;
        auto ft = search::InvertedIndex::build(docs, search::IndexField::FULLTEXT, &warnings);
        CHECK(ft.checksum() == index.checksum());
        CHECK_FALSE(warnings.empty());
    }
}

TEST_CASE("execute_query matches the brute-force oracle exactly") {
    search::Bm25Params params;
    SUBCASE("toy corpus") {
        auto docs = toy_corpus();
        auto index = search::InvertedIndex::build(docs);
        search::Query q;
        q.terms = {{"printhead", 1.0}, {"nozzl", 1.0}, {"substrat", 1.0}};
        auto got = search::execute_query(index, q, params);
        auto want = brute_force(docs, q, params);
        REQUIRE(got.hits.size() == want.size());
        for (std::size_t i = 0; i < want.size(); ++i) {
            CHECK(got.hits[i].doc_id == want[i].doc_id);
            CHECK(got.hits[i].score == want[i].score);  // bit-identical
        }
    }
    SUBCASE("randomized corpora") {
        for (unsigned seed : {11u, 12u, 13u}) {
            auto docs = random_corpus(120, seed);
            auto index = search::InvertedIndex::build(docs);
            std::mt19937 rng(seed * 7);
            std::uniform_real_distribution<double> boost(0.1, 2.0);
            for (int trial = 0; trial < 10; ++trial) {
                search::Query q;
                for (const char* stem : {"printhead", "nozzl", "substrat", "dipol", "wafer"})
                    q.terms.push_back({stem, boost(rng)});
                q.limit = 25;
                auto got = search::execute_query(index, q, {});
                auto want = brute_force(docs, q, {});
                REQUIRE(got.hits.size() == want.size());
                for (std::size_t i = 0; i < want.size(); ++i) {
                    CHECK(got.hits[i].doc_id == want[i].doc_id);
                    CHECK(got.hits[i].score == want[i].score);
                }
            }
        }
    }
}

TEST_CASE("boost behaviour") {
    auto docs = random_corpus(80, 21);
    auto index = search::InvertedIndex::build(docs);
    search::Query plain;
    plain.terms = {{"printhead", 1.0}, {"substrat", 1.0}, {"valv", 1.0}};

    SUBCASE("unit boosts are a no-op") {
        auto base = search::execute_query(index, plain);
        auto boosted = search::execute_query(index, plain);
        REQUIRE(base.hits.size() == boosted.hits.size());
        for (std::size_t i = 0; i < base.hits.size(); ++i) {
            CHECK(base.hits[i].doc_id == boosted.hits[i].doc_id);
            CHECK(base.hits[i].score == boosted.hits[i].score);
        }
    }
    SUBCASE("uniform scaling preserves the ranking order") {
        search::Query scaled = plain;
        for (auto& t : scaled.terms) t.boost = 2.0;
        auto base = search::execute_query(index, plain);
        auto twice = search::execute_query(index, scaled);
        REQUIRE(base.hits.size() == twice.hits.size());
        for (std::size_t i = 0; i < base.hits.size(); ++i) {
            CHECK(base.hits[i].doc_id == twice.hits[i].doc_id);
            CHECK(twice.hits[i].score == doctest::Approx(2.0 * base.hits[i].score));
        }
    }
    SUBCASE("raising one term's boost can only help docs containing it") {
        search::Query skew = plain;
        skew.terms[0].boost = 5.0;
        auto base = search::execute_query(index, plain);
        auto skewed = search::execute_query(index, skew);
        // every doc score either grew or stayed identical
        std::map<std::string, double> before;
        for (const auto& h : base.hits) before[h.doc_id] = h.score;
        for (const auto& h : skewed.hits) CHECK(h.score >= before.at(h.doc_id) - 1e-12);
    }
}

TEST_CASE("topic self-exclusion") {
    auto docs = toy_corpus();
    auto index = search::InvertedIndex::build(docs);
    search::Query q;
    q.terms = {{"printhead", 1.0}};
    auto open = search::execute_query(index, q);
    bool saw_d1 = false;
    for (const auto& h : open.hits) saw_d1 |= h.doc_id == "D1";
    CHECK(saw_d1);

    q.topic_id = "D1";
    auto excl = search::execute_query(index, q);
    for (const auto& h : excl.hits) CHECK(h.doc_id != "D1");
    CHECK(excl.hits.size() == open.hits.size() - 1);
}

TEST_CASE("limit truncates a longer ranking") {
    auto docs = random_corpus(50, 31);
    auto index = search::InvertedIndex::build(docs);
    search::Query q;
    q.terms = {{"printhead", 1.0}, {"nozzl", 1.0}};
    q.limit = 5;
    auto capped = search::execute_query(index, q);
    CHECK(capped.hits.size() == 5);
    q.limit = 1000;
    auto full = search::execute_query(index, q);
    REQUIRE(full.hits.size() >= 5);
    for (std::size_t i = 0; i < 5; ++i) CHECK(capped.hits[i].doc_id == full.hits[i].doc_id);
}

TEST_CASE("batch execution is thread-count independent") {
    auto docs = random_corpus(100, 41);
    auto index = search::InvertedIndex::build(docs);
    std::vector<search::Query> queries;
    for (int i = 0; i < 40; ++i) {
        search::Query q;
        q.terms = {{"printhead", 1.0}, {"wafer", 0.5}, {"membran", 1.5}};
        q.topic_id = docs[static_cast<std::size_t>(i)].doc_id;
        queries.push_back(q);
    }
    auto serial = search::execute_queries(index, queries, "r", {}, 1);
    auto parallel = search::execute_queries(index, queries, "r", {}, 4);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].topic_id == parallel[i].topic_id);
        REQUIRE(serial[i].hits.size() == parallel[i].hits.size());
        for (std::size_t j = 0; j < serial[i].hits.size(); ++j) {
            CHECK(serial[i].hits[j].doc_id == parallel[i].hits[j].doc_id);
            CHECK(serial[i].hits[j].score == parallel[i].hits[j].score);
        }
    }
}

TEST_CASE("mlt and tfidf baselines") {
    auto docs = toy_corpus();
    auto index = search::InvertedIndex::build(docs);

    SUBCASE("mlt picks the highest tf*idf stems of the source text") {
        auto q = search::mlt_baseline(index, "nozzles nozzles luminescence", 2);
        REQUIRE(q.terms.size() == 2);
        // "luminescence" appears in 1/4 docs, "nozzles" in 2/4; with tf 1 vs 2
        for (const auto& t : q.terms) CHECK(t.boost == 1.0);
        std::set<std::string> stems;
        for (const auto& t : q.terms) stems.insert(t.stem);
        CHECK(stems == std::set<std::string>{"nozzl", "luminesc"});
    }
    SUBCASE("terms absent from the index are skipped") {
        auto q = search::mlt_baseline(index, "zzz qqq nozzles", 10);
        REQUIRE(q.terms.size() == 1);
        CHECK(q.terms[0].stem == "nozzl");
    }
    SUBCASE("tfidf baseline reads the whole topic document") {
        auto q = search::tfidf_keyword_baseline(index, docs[0], 3);
        CHECK(q.terms.size() == 3);
        for (const auto& t : q.terms) CHECK(index.document_frequency(t.stem) > 0);
    }
}

TEST_CASE("run files round-trip") {
    std::vector<search::RunResult> results;
    search::RunResult r;
    r.topic_id = "T1";
    r.run_name = "toy";
    r.hits = {{"D2", 1.25}, {"D7", 0.5}};
    results.push_back(r);
    r.topic_id = "T2";
    r.hits = {{"D1", 3.0}};
    results.push_back(r);

    const std::string path = "/tmp/juju_test_run.run";
    search::write_run_file(results, path);
    auto back = search::read_run_file(path);
    REQUIRE(back.size() == 2);
    CHECK(back[0].topic_id == "T1");
    CHECK(back[0].run_name == "toy");
    REQUIRE(back[0].hits.size() == 2);
    CHECK(back[0].hits[0].doc_id == "D2");
    CHECK(back[0].hits[0].score == doctest::Approx(1.25));
    CHECK(back[1].hits[0].doc_id == "D1");
    std::remove(path.c_str());
}

TEST_CASE("index snapshot round-trip") {
    auto docs = random_corpus(60, 51);
    auto index = search::InvertedIndex::build(docs);
    const std::string path = "/tmp/juju_test_index.snapshot";
    index.save(path);
    auto loaded = search::InvertedIndex::load(path);
    CHECK(loaded.checksum() == index.checksum());
    CHECK(loaded.doc_count() == index.doc_count());
    CHECK(loaded.avg_doc_length() == index.avg_doc_length());

    search::Query q;
    q.terms = {{"printhead", 1.0}, {"coat", 1.3}};
    auto a = search::execute_query(index, q);
    auto b = search::execute_query(loaded, q);
    REQUIRE(a.hits.size() == b.hits.size());
    for (std::size_t i = 0; i < a.hits.size(); ++i) {
        CHECK(a.hits[i].doc_id == b.hits[i].doc_id);
        CHECK(a.hits[i].score == b.hits[i].score);
    }
    std::remove(path.c_str());
}

TEST_CASE("checksum is stable across rebuilds and sensitive to content") {
    auto docs = toy_corpus();
    auto a = search::InvertedIndex::build(docs);
    auto b = search::InvertedIndex::build(docs);
    CHECK(a.checksum() == b.checksum());

    docs[0].claims[0].text += " extra token";
    auto c = search::InvertedIndex::build(docs);
    CHECK(c.checksum() != a.checksum());
}
