#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "juju/corpus.hpp"

namespace juju::search {

enum class IndexField { CLAIMS, FULLTEXT };

struct Posting {
    std::uint32_t doc = 0;  // internal id
    std::uint32_t tf = 0;
};

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

// Analysis chain shared by indexing and querying:
// tokenize -> lowercase -> stopword filter -> porter_stem.
std::vector<std::string> analyze(const std::string& text);

class InvertedIndex {
public:
    static InvertedIndex build(const std::vector<corpus::PatentDocument>& docs,
                               IndexField field = IndexField::CLAIMS,
                               std::vector<std::string>* warnings = nullptr);

    std::size_t doc_count() const { return doc_ids_.size(); }
    const std::string& doc_id(std::uint32_t internal) const { return doc_ids_[internal]; }
    std::size_t doc_length(std::uint32_t internal) const { return doc_lengths_[internal]; }
    double avg_doc_length() const { return avg_len_; }
    std::size_t document_frequency(const std::string& term) const;
    const std::vector<Posting>* postings(const std::string& term) const;
    const std::vector<std::string>& vocabulary() const { return vocab_; }

    void save(const std::string& path) const;
    static InvertedIndex load(const std::string& path);

    // stable content digest, used by tests to assert immutability
    std::uint64_t checksum() const;

private:
    std::vector<std::string> doc_ids_;
    std::vector<std::size_t> doc_lengths_;
    double avg_len_ = 0.0;
    std::vector<std::string> vocab_;                        // sorted
    std::unordered_map<std::string, std::size_t> term_ids_;
    std::vector<std::vector<Posting>> postings_;
};

struct QueryTerm {
    std::string stem;
    double boost = 1.0;
};

struct Query {
    std::vector<QueryTerm> terms;
    std::size_t limit = 1000;
    std::string topic_id;  // excluded from results when set
};

struct ScoredDoc {
    std::string doc_id;
    double score;
};

struct RunResult {
    std::string topic_id;
    std::vector<ScoredDoc> hits;  // descending score, doc_id ascending on ties
    std::string run_name;
};

// BM25 with per-term multiplicative boosts; top `limit` by (score desc,
// doc_id asc).
RunResult execute_query(const InvertedIndex& index, const Query& query,
                        const Bm25Params& params = {});

// Batch execution over many topics; identical output for any thread count.
std::vector<RunResult> execute_queries(const InvertedIndex& index,
                                       const std::vector<Query>& queries,
                                       const std::string& run_name,
                                       const Bm25Params& params = {}, int threads = 1);

// More Like This: top tf*log(N/df) stems of the source text as an unboosted
// query.
Query mlt_baseline(const InvertedIndex& index, const std::string& source_text,
                   std::size_t max_terms = 25);

// Same ranking rule applied to the topic document's own text.
Query tfidf_keyword_baseline(const InvertedIndex& index,
                             const corpus::PatentDocument& doc, std::size_t n);

// "topic_id Q0 doc_id rank score run_name", rank from 1, score 6 decimals.
void write_run_file(const std::vector<RunResult>& results, const std::string& path);
std::vector<RunResult> read_run_file(const std::string& path);

}  // namespace juju::search
