#pragma once

#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace juju::corpus {

struct Claim {
    int number = 0;
    std::string text;
    std::set<int> parent_refs;   // resolved from reference phrases in the text
    int depth = 0;               // hops up to a parentless claim, shortest path
};

struct PatentDocument {
    std::string doc_id;
    std::string lang;
    std::vector<std::string> cpc_codes;
    std::vector<Claim> claims;

    const Claim* find_claim(int number) const;
};

struct QrelEntry {
    std::string topic_id;
    std::string doc_id;
    char code = '\0';
};

// Only judgments with code 'X' count as relevant.
struct QrelSet {
    std::vector<QrelEntry> entries;                         // file order
    std::map<std::string, std::set<std::string>> relevant;  // topic -> docs, 'X' only
    std::map<char, std::size_t> code_counts;

    std::string serialize() const;
};

struct CorpusStats {
    std::map<std::size_t, std::size_t> sentence_length_histogram;  // words -> count
    std::vector<double> flesch_scores;  // one per non-empty claim sentence
    double claim_split_rate = 0.0;      // fraction a naive splitter breaks up
    std::size_t empty_claims = 0;
};

struct LoadReport {
    std::vector<std::string> warnings;  // per-record problems, with line numbers
    std::size_t skipped = 0;
};

class corpus_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Claim reference phrases: "claim N", "claims N to M", "claims N, M and K",
// "any of the preceding claims" (-> every number below self_number).
// The claim's own number is never returned.
std::set<int> extract_claim_refs(const std::string& text, int self_number);

// Shortest hop count up to a parentless claim; min over parents when several.
// Throws corpus_error on unknown numbers or reference cycles.
int claim_depth(const PatentDocument& doc, int number);

// JSONL corpus, one document object per line. In strict mode the first
// malformed line aborts; otherwise it is skipped and reported.
std::vector<PatentDocument> load_corpus(const std::string& path,
                                        LoadReport* report = nullptr,
                                        bool strict = false);

QrelSet load_qrels(const std::string& path);

using WordTokenizer = std::function<std::vector<std::string>(const std::string&)>;

// Heuristic syllable count: maximal vowel groups, minus terminal silent 'e',
// at least 1 per word.
std::size_t count_syllables(const std::string& word);

double flesch_reading_ease(std::size_t words, std::size_t syllables);

// How many sentences a naive splitter would cut this claim text into.
std::size_t naive_sentence_count(const std::string& text);

CorpusStats corpus_stats(const std::vector<PatentDocument>& docs,
                         const WordTokenizer& tokenizer);

}  // namespace juju::corpus
