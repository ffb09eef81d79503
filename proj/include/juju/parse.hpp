#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace juju::parse {

struct Token {
    std::string surface;
    int index = 0;    // 0-based position within the claim
    std::string pos;  // Penn tag, empty until a parse is attached
};

// Constituency tree node. Terminals carry the surface word and a leaf index;
// their label is the POS tag.
struct ParseTree {
    std::string label;
    std::string word;      // terminals only
    int leaf_index = -1;   // terminals only, in-order 0,1,2,...
    std::vector<ParseTree> children;

    bool terminal() const { return children.empty(); }
};

class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& msg, std::size_t offset)
        : std::runtime_error(msg), byte_offset(offset) {}
    std::size_t byte_offset;
};

// One claim is always one sentence; there is no sentence splitting here.
// Splits on whitespace and punctuation, so "(40)" becomes "(", "40", ")".
std::vector<Token> tokenize_claim(const std::string& text);

// Bracketed tree, e.g. "(NP (DT a) (NN layer))". Leaf indices assigned in
// reading order. Throws parse_error with the byte offset on malformed input.
ParseTree parse_bracketed(const std::string& text);

std::string serialize(const ParseTree& tree);

using ForestKey = std::pair<std::string, int>;  // (doc_id, claim number)

// Keyed forest file: "#doc <doc_id> <claim_num>" lines, each followed by one
// balanced bracketed tree (possibly spanning lines).
std::map<ForestKey, ParseTree> read_ptb_forest(const std::string& path,
                                               std::vector<std::string>* warnings = nullptr);

// Left-to-right terminals as (surface, POS).
std::vector<std::pair<std::string, std::string>> pos_sequence(const ParseTree& tree);

std::vector<Token> tokens_of(const ParseTree& tree);

}  // namespace juju::parse
