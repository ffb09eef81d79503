#include "juju/parse.hpp"

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>

namespace juju::parse {

std::vector<Token> tokenize_claim(const std::string& text) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    auto push = [&](std::string s) {
        Token t;
        t.surface = std::move(s);
        t.index = static_cast<int>(tokens.size());
        tokens.push_back(std::move(t));
    };
    while (i < text.size()) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (std::isspace(c)) {
            ++i;
        } else if (std::isalnum(c) || c >= 0x80) {
            std::size_t j = i;
            while (j < text.size()) {
                unsigned char d = static_cast<unsigned char>(text[j]);
                if (std::isalnum(d) || d >= 0x80)
                    ++j;
                else
                    break;
            }
            push(text.substr(i, j - i));
            i = j;
        } else {
            push(std::string(1, text[i]));
            ++i;
        }
    }
    return tokens;
}

namespace {

struct BracketReader {
    const std::string& text;
    std::size_t pos = 0;
    int next_leaf = 0;

    explicit BracketReader(const std::string& t) : text(t) {}

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    [[noreturn]] void fail(const std::string& msg, std::size_t at) {
        throw parse_error(msg + " at byte " + std::to_string(at), at);
    }

    std::string read_atom() {
        std::size_t start = pos;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
               text[pos] != '(' && text[pos] != ')')
            ++pos;
        if (pos == start) fail("expected symbol", pos);
        return text.substr(start, pos - start);
    }

    ParseTree read_node() {
        skip_ws();
        if (pos >= text.size() || text[pos] != '(') fail("expected '('", pos);
        std::size_t open_at = pos;
        ++pos;
        skip_ws();
        ParseTree node;
        node.label = read_atom();
        skip_ws();
        if (pos < text.size() && text[pos] == '(') {
            while (true) {
                skip_ws();
                if (pos >= text.size()) fail("unbalanced bracket", open_at);
                if (text[pos] == ')') {
                    ++pos;
                    break;
                }
                node.children.push_back(read_node());
            }
        } else {
            node.word = read_atom();
            node.leaf_index = next_leaf++;
            skip_ws();
            if (pos >= text.size() || text[pos] != ')') fail("unbalanced bracket", open_at);
            ++pos;
        }
        return node;
    }
};

void collect_terminals(const ParseTree& tree,
                       std::vector<const ParseTree*>& out) {
    if (tree.terminal()) {
        out.push_back(&tree);
        return;
    }
    for (const auto& c : tree.children) collect_terminals(c, out);
}

}  // namespace

ParseTree parse_bracketed(const std::string& text) {
    BracketReader reader(text);
    ParseTree tree = reader.read_node();
    reader.skip_ws();
    if (reader.pos != text.size())
        throw parse_error("trailing content at byte " + std::to_string(reader.pos),
                          reader.pos);
    return tree;
}

std::string serialize(const ParseTree& tree) {
    std::string out = "(" + tree.label;
    if (tree.terminal()) {
        out += " " + tree.word;
    } else {
        for (const auto& c : tree.children) out += " " + serialize(c);
    }
    out += ")";
    return out;
}

std::map<ForestKey, ParseTree> read_ptb_forest(const std::string& path,
                                               std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open forest file: " + path, 0);
    std::map<ForestKey, ParseTree> forest;
    std::string line;
    std::size_t lineno = 0;
    std::optional<ForestKey> key;
    std::string buffer;
    std::size_t record_offset = 0, offset = 0;

    auto flush = [&]() {
        if (!key) return;
        if (buffer.find('(') == std::string::npos)
            throw parse_error("missing tree for record at byte " +
                                  std::to_string(record_offset),
                              record_offset);
        try {
            forest[*key] = parse_bracketed(buffer);
        } catch (const parse_error& e) {
            throw parse_error(std::string(e.what()) + " (record offset " +
                                  std::to_string(record_offset) + ")",
                              record_offset + e.byte_offset);
        }
        key.reset();
        buffer.clear();
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (line.rfind("#doc ", 0) == 0) {
            flush();
            std::istringstream is(line.substr(5));
            std::string doc_id;
            int claim_num = 0;
            if (!(is >> doc_id >> claim_num)) {
                if (warnings)
                    warnings->push_back(path + ":" + std::to_string(lineno) +
                                        ": malformed record header");
            } else {
                key = ForestKey{doc_id, claim_num};
                record_offset = offset;
            }
        } else if (key) {
            buffer += line;
            buffer += '\n';
        } else if (!line.empty() && warnings) {
            warnings->push_back(path + ":" + std::to_string(lineno) +
                                ": content outside any record ignored");
        }
        offset += line.size() + 1;
    }
    flush();
    return forest;
}

std::vector<std::pair<std::string, std::string>> pos_sequence(const ParseTree& tree) {
    std::vector<const ParseTree*> leaves;
    collect_terminals(tree, leaves);
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(leaves.size());
    for (const auto* leaf : leaves) out.emplace_back(leaf->word, leaf->label);
    return out;
}

std::vector<Token> tokens_of(const ParseTree& tree) {
    std::vector<const ParseTree*> leaves;
    collect_terminals(tree, leaves);
    std::vector<Token> tokens;
    tokens.reserve(leaves.size());
    for (const auto* leaf : leaves) {
        Token t;
        t.surface = leaf->word;
        t.index = static_cast<int>(tokens.size());
        t.pos = leaf->label;
        tokens.push_back(std::move(t));
    }
    return tokens;
}

}  // namespace juju::parse
