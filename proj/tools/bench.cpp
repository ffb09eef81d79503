// Compares the serial and OpenMP-parallel paths of the batch stages on a
// synthetic corpus and checks that both produce identical output.

#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "juju/corpus.hpp"
#include "juju/eval.hpp"
#include "juju/search.hpp"

using namespace juju;

namespace {

std::vector<corpus::PatentDocument> synthetic_corpus(std::size_t n_docs, unsigned seed) {
    static const std::vector<std::string> vocab = {
        "nozzle",   "resistor", "circuit",  "membrane", "substrate", "layer",
        "electrode", "polymer",  "catalyst", "piston",   "valve",     "sensor",
        "actuator", "housing",  "conduit",  "filter",    "spring",    "gear",
        "bearing",  "coupling", "flange",   "chamber",   "duct",      "rotor",
    };
    std::mt19937 rng(seed);
    std::vector<corpus::PatentDocument> docs;
    for (std::size_t i = 0; i < n_docs; ++i) {
        corpus::PatentDocument doc;
        doc.doc_id = "D" + std::to_string(1000 + i);
        std::size_t n_claims = 2 + rng() % 4;
        for (std::size_t c = 1; c <= n_claims; ++c) {
            corpus::Claim claim;
            claim.number = static_cast<int>(c);
            std::string text = "An apparatus comprising";
            std::size_t words = 20 + rng() % 30;
            for (std::size_t w = 0; w < words; ++w)
                text += " " + vocab[rng() % vocab.size()];
            claim.text = text + ".";
            doc.claims.push_back(std::move(claim));
        }
        docs.push_back(std::move(doc));
    }
    return docs;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                     start)
        .count();
}

}  // namespace

int main() {
    int max_threads = 1;
#ifdef _OPENMP
    max_threads = omp_get_max_threads();
#endif
    std::printf("max threads: %d\n", max_threads);

    auto docs = synthetic_corpus(2000, 99);
    auto index = search::InvertedIndex::build(docs);

    std::vector<search::Query> queries;
    std::mt19937 rng(7);
    for (std::size_t i = 0; i < 400; ++i) {
        search::Query q;
        q.limit = 100;
        for (int t = 0; t < 5; ++t)
            q.terms.push_back({search::analyze("nozzle resistor circuit membrane piston "
                                               "valve sensor gear")[rng() % 8],
                               1.0});
        queries.push_back(std::move(q));
    }

    auto t0 = std::chrono::steady_clock::now();
    auto serial = search::execute_queries(index, queries, "bench", {}, 1);
    double serial_ms = elapsed_ms(t0);
    t0 = std::chrono::steady_clock::now();
    auto parallel = search::execute_queries(index, queries, "bench", {}, max_threads);
    double parallel_ms = elapsed_ms(t0);
    bool same = serial.size() == parallel.size();
    for (std::size_t i = 0; same && i < serial.size(); ++i)
        same = serial[i].hits.size() == parallel[i].hits.size() &&
               std::equal(serial[i].hits.begin(), serial[i].hits.end(),
                          parallel[i].hits.begin(),
                          [](const search::ScoredDoc& a, const search::ScoredDoc& b) {
                              return a.doc_id == b.doc_id && a.score == b.score;
                          });
    std::printf("query batch:        serial %8.1f ms, %d threads %8.1f ms, speedup %.2fx, "
                "identical: %s\n",
                serial_ms, max_threads, parallel_ms, serial_ms / parallel_ms,
                same ? "yes" : "NO");

    std::vector<double> a(200), b(200);
    std::normal_distribution<double> noise(0.0, 0.1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = 0.5 + noise(rng);
        b[i] = 0.48 + noise(rng);
    }
    t0 = std::chrono::steady_clock::now();
    double p1 = eval::randomization_test(a, b, 200000, 42, 1);
    serial_ms = elapsed_ms(t0);
    t0 = std::chrono::steady_clock::now();
    double p2 = eval::randomization_test(a, b, 200000, 42, max_threads);
    parallel_ms = elapsed_ms(t0);
    std::printf("randomization test: serial %8.1f ms, %d threads %8.1f ms, speedup %.2fx, "
                "identical: %s (p=%.5f)\n",
                serial_ms, max_threads, parallel_ms, serial_ms / parallel_ms,
                p1 == p2 ? "yes" : "NO", p1);
    return same && p1 == p2 ? 0 : 1;
}
