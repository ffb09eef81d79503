#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "juju/parse.hpp"

namespace juju::spectree {

enum class Relation { ROOT, SPECIALIZATION, AGGREGATION };

struct SpecNode {
    std::vector<parse::Token> tokens;  // owned by this node, descendants excluded
    std::vector<SpecNode> children;
    Relation relation = Relation::ROOT;
    int depth = 0;    // nd: root 0, child = parent + 1
    int height = 1;   // nh: leaf 1, else 1 + max child height
};

// Derives a specialization tree from a constituency parse. New SPECIALIZATION
// nodes open at SBAR constituents, at PPs inside an NP or VP, and at VPs
// headed by a VBG/VBN participle. Conjuncts around CC and segments separated
// by ";" / ":" at the same bracket level become AGGREGATION siblings.
SpecNode build_spec_tree_from_parse(const parse::ParseTree& tree);

// Fallback when no parse is available: cue phrases ("wherein", "such that",
// "characterized in that", "comprising", "consisting of", "according to")
// open SPECIALIZATION children; ";" and ":" lists open AGGREGATION siblings.
SpecNode build_spec_tree_from_cues(const std::vector<parse::Token>& tokens);

std::size_t token_count(const SpecNode& node);

// Indented debug dump, two spaces per depth level, "[S]"/"[A]" relation tags.
std::string dump(const SpecNode& node);

// (nd, nh, cd) of one node containing the word
struct Occurrence {
    int nd, nh, cd;
    auto operator<=>(const Occurrence&) const = default;
};

struct WordProfile {
    std::set<Occurrence> triples;                         // P(w)
    std::map<int, std::pair<int, int>> per_claim;         // claim key -> (max nd, cd)
    std::size_t count = 0;                                // total occurrences
    std::size_t first_seen = 0;                           // global arrival order
};

// word (lowercased) -> profile over the whole claim set
using OccurrenceProfile = std::map<std::string, WordProfile>;

struct ClaimEntry {
    const SpecNode* tree;
    int claim_depth;
    int claim_key;  // distinct per claim within the document
};

using WordFilter = std::function<bool(const std::string&)>;

// Default candidacy filter: lowercase alphabetic words of length >= 2 that
// are not stopwords.
WordFilter default_word_filter();
const std::set<std::string>& default_stopwords();

OccurrenceProfile word_occurrences(const std::vector<ClaimEntry>& claims,
                                   const WordFilter& filter = default_word_filter());

}  // namespace juju::spectree
