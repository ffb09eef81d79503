#pragma once

#include <map>
#include <string>
#include <vector>

#include "juju/spectree.hpp"

namespace juju::scoring {

// Classic Porter (1980) stemming algorithm. Expects a lowercased word.
std::string porter_stem(const std::string& word);

enum class Variant { JUJU05, JUJU06 };

struct ScoringParams {
    Variant variant = Variant::JUJU06;
    double alpha = 1.0;
    double beta = 2.0;

    static ScoringParams defaults(Variant v) {
        return v == Variant::JUJU06 ? ScoringParams{v, 1.0, 2.0}
                                    : ScoringParams{v, 1.0, 1.0};
    }
};

struct StemRecord {
    std::string stem;
    std::string representative;  // surface word with the most occurrences
    std::map<std::string, std::size_t> word_counts;
    std::set<spectree::Occurrence> profile;        // P(s) = union of P(w)
    std::map<int, std::pair<int, int>> per_claim;  // claim key -> (max nd, cd)
    std::size_t first_seen = 0;
};

std::map<std::string, StemRecord> aggregate_stems(const spectree::OccurrenceProfile& profile);

// Juju-05: sum over P(s) of exp(a*nd/(nd+nh) + b*cd).
// Juju-06: sum over the distinct claims containing the stem of
//          exp(a*max nd within the claim + b*cd of the claim).
double score_stem(const StemRecord& record, const ScoringParams& params);

struct Keyword {
    std::string word;   // representative surface form
    double score;       // normalized, all stems sum to 1
};

struct KeywordList {
    std::vector<Keyword> keywords;  // descending score, deterministic ties
    std::size_t total_stems = 0;
};

// Normalizes over every stem (scores sum to 1), then truncates to top N.
KeywordList extract_keywords(const std::map<std::string, StemRecord>& records,
                             const ScoringParams& params, std::size_t n);

double keyword_text_ratio(const KeywordList& keywords, std::size_t unique_candidate_words);

}  // namespace juju::scoring
