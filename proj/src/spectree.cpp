#include "juju/spectree.hpp"

#include <algorithm>
#include <cctype>

namespace juju::spectree {

namespace {

bool label_starts(const std::string& label, const char* prefix) {
    return label.rfind(prefix, 0) == 0;
}

const parse::ParseTree* leftmost_terminal(const parse::ParseTree& node) {
    const parse::ParseTree* cur = &node;
    while (!cur->terminal()) cur = &cur->children.front();
    return cur;
}

bool is_separator(const parse::ParseTree& node) {
    if (!node.terminal()) return false;
    return node.label == "CC" || node.word == ";" || node.word == ":";
}

// SBAR; PP under NP/VP; VP whose head verb is a VBG/VBN participle.
bool is_specialization_trigger(const parse::ParseTree& node, const std::string& parent_label) {
    if (node.terminal()) return false;
    if (label_starts(node.label, "SBAR")) return true;
    if (label_starts(node.label, "PP") &&
        (label_starts(parent_label, "NP") || label_starts(parent_label, "VP")))
        return true;
    if (label_starts(node.label, "VP")) {
        const auto* head = leftmost_terminal(node);
        if (head->label == "VBG" || head->label == "VBN") return true;
    }
    return false;
}

parse::Token token_of(const parse::ParseTree& leaf) {
    parse::Token t;
    t.surface = leaf.word;
    t.index = leaf.leaf_index;
    t.pos = leaf.label;
    return t;
}

struct ParseBuilder {
    void place(const parse::ParseTree& child, SpecNode& cur, const std::string& parent_label) {
        if (child.terminal()) {
            cur.tokens.push_back(token_of(child));
        } else if (is_specialization_trigger(child, parent_label)) {
            cur.children.emplace_back();
            cur.children.back().relation = Relation::SPECIALIZATION;
            walk(child, cur.children.back());
        } else {
            walk(child, cur);
        }
    }

    void walk(const parse::ParseTree& constituent, SpecNode& cur) {
        // aggregation: conjuncts around CC / ";" / ":" at this level
        std::vector<std::vector<const parse::ParseTree*>> segments(1);
        std::vector<const parse::ParseTree*> separators;
        for (const auto& child : constituent.children) {
            if (is_separator(child)) {
                separators.push_back(&child);
                segments.emplace_back();
            } else {
                segments.back().push_back(&child);
            }
        }
        std::erase_if(segments, [](const auto& s) { return s.empty(); });

        if (segments.size() < 2) {
            for (const auto& child : constituent.children) {
                if (is_separator(child))
                    cur.tokens.push_back(token_of(child));
                else
                    place(child, cur, constituent.label);
            }
            return;
        }
        for (const auto* sep : separators) cur.tokens.push_back(token_of(*sep));
        for (const auto& segment : segments) {
            cur.children.emplace_back();
            SpecNode& agg = cur.children.back();
            agg.relation = Relation::AGGREGATION;
            for (const auto* child : segment) place(*child, agg, constituent.label);
        }
    }
};

void finalize(SpecNode& node, int depth) {
    node.depth = depth;
    node.height = 1;
    for (auto& c : node.children) {
        finalize(c, depth + 1);
        node.height = std::max(node.height, c.height + 1);
    }
}

void sort_node_tokens(SpecNode& node) {
    std::sort(node.tokens.begin(), node.tokens.end(),
              [](const parse::Token& a, const parse::Token& b) { return a.index < b.index; });
    for (auto& c : node.children) sort_node_tokens(c);
}

}  // namespace

SpecNode build_spec_tree_from_parse(const parse::ParseTree& tree) {
    SpecNode root;
    root.relation = Relation::ROOT;
    ParseBuilder builder;
    if (tree.terminal())
        root.tokens.push_back(token_of(tree));
    else
        builder.walk(tree, root);
    sort_node_tokens(root);
    finalize(root, 0);
    return root;
}

namespace {

// multi-word cue phrases first so that the longest cue wins
const std::vector<std::vector<std::string>> kCuePhrases = {
    {"characterized", "in", "that"},
    {"such", "that"},
    {"consisting", "of"},
    {"according", "to"},
    {"wherein"},
    {"comprising"},
};

std::string lower(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::size_t cue_at(const std::vector<parse::Token>& tokens, std::size_t i) {
    for (const auto& phrase : kCuePhrases) {
        if (i + phrase.size() > tokens.size()) continue;
        bool match = true;
        for (std::size_t k = 0; k < phrase.size(); ++k)
            if (lower(tokens[i + k].surface) != phrase[k]) {
                match = false;
                break;
            }
        if (match) return phrase.size();
    }
    return 0;
}

struct CueBuilder {
    // arena-based: child vectors would invalidate pointers while building
    struct Node {
        std::vector<parse::Token> tokens;
        std::vector<std::size_t> children;
        Relation relation = Relation::ROOT;
        std::size_t parent = 0;
    };
    std::vector<Node> arena;

    std::size_t add_child(std::size_t parent, Relation rel) {
        arena.push_back(Node{});
        arena.back().relation = rel;
        arena.back().parent = parent;
        std::size_t id = arena.size() - 1;
        arena[parent].children.push_back(id);
        return id;
    }

    SpecNode materialize(std::size_t id) const {
        SpecNode node;
        node.tokens = arena[id].tokens;
        node.relation = arena[id].relation;
        for (std::size_t c : arena[id].children) node.children.push_back(materialize(c));
        return node;
    }

    SpecNode build(const std::vector<parse::Token>& tokens) {
        arena.push_back(Node{});
        std::size_t cur = 0;
        // open aggregation lists: (list parent node, current segment node)
        std::vector<std::pair<std::size_t, std::size_t>> lists;

        std::size_t i = 0;
        while (i < tokens.size()) {
            const auto& tok = tokens[i];
            if (std::size_t len = cue_at(tokens, i); len > 0) {
                // the characterizing portion always hangs off the claim root
                if (lower(tok.surface) == "characterized") {
                    cur = 0;
                    lists.clear();
                }
                cur = add_child(cur, Relation::SPECIALIZATION);
                for (std::size_t k = 0; k < len; ++k)
                    arena[cur].tokens.push_back(tokens[i + k]);
                i += len;
                continue;
            }
            if (tok.surface == ":") {
                arena[cur].tokens.push_back(tok);
                std::size_t seg = add_child(cur, Relation::AGGREGATION);
                lists.emplace_back(cur, seg);
                cur = seg;
                ++i;
                continue;
            }
            if (tok.surface == ";") {
                if (!lists.empty()) {
                    auto& [list_parent, seg] = lists.back();
                    arena[list_parent].tokens.push_back(tok);
                    seg = add_child(list_parent, Relation::AGGREGATION);
                    cur = seg;
                } else {
                    // list with no introducing ":": siblings under the current node
                    arena[cur].tokens.push_back(tok);
                    std::size_t seg = add_child(cur, Relation::AGGREGATION);
                    lists.emplace_back(cur, seg);
                    cur = seg;
                }
                ++i;
                continue;
            }
            arena[cur].tokens.push_back(tok);
            ++i;
        }
        SpecNode root = materialize(0);
        finalize(root, 0);
        return root;
    }
};

}  // namespace

SpecNode build_spec_tree_from_cues(const std::vector<parse::Token>& tokens) {
    CueBuilder builder;
    return builder.build(tokens);
}

std::size_t token_count(const SpecNode& node) {
    std::size_t n = node.tokens.size();
    for (const auto& c : node.children) n += token_count(c);
    return n;
}

namespace {

void dump_node(const SpecNode& node, std::string& out) {
    for (int i = 0; i < node.depth; ++i) out += "  ";
    switch (node.relation) {
        case Relation::SPECIALIZATION: out += "[S] "; break;
        case Relation::AGGREGATION: out += "[A] "; break;
        case Relation::ROOT: break;
    }
    for (std::size_t i = 0; i < node.tokens.size(); ++i) {
        if (i) out += ' ';
        out += node.tokens[i].surface;
    }
    out += '\n';
    for (const auto& c : node.children) dump_node(c, out);
}

}  // namespace

std::string dump(const SpecNode& node) {
    std::string out;
    dump_node(node, out);
    return out;
}

const std::set<std::string>& default_stopwords() {
    static const std::set<std::string> stopwords = {
        // general English
        "a", "an", "and", "any", "are", "as", "at", "be", "being", "between", "both", "by",
        "can", "each", "for", "from", "further", "has", "have", "having", "in", "into", "is",
        "it", "its", "least", "may", "means", "more", "of", "on", "one", "or", "other",
        "least", "that", "the", "thereby", "therein", "thereof", "thereto", "this", "to",
        "when", "where", "which", "with", "within",
        // claim boilerplate
        "said", "claim", "claims", "wherein", "according", "preceding", "characterized",
        "comprising", "comprises", "consisting", "such",
    };
    return stopwords;
}

WordFilter default_word_filter() {
    return [](const std::string& word) {
        if (word.size() < 2) return false;
        for (unsigned char c : word)
            if (!std::islower(c)) return false;
        return default_stopwords().count(word) == 0;
    };
}

namespace {

void collect_words(const SpecNode& node, int cd, int claim_key, OccurrenceProfile& profile,
                   const WordFilter& filter, std::size_t& arrival) {
    for (const auto& tok : node.tokens) {
        std::string word = lower(tok.surface);
        if (!filter(word)) continue;
        auto& p = profile[word];
        if (p.count == 0) p.first_seen = arrival;
        ++arrival;
        ++p.count;
        p.triples.insert({node.depth, node.height, cd});
        auto [it, inserted] = p.per_claim.try_emplace(claim_key, node.depth, cd);
        if (!inserted) it->second.first = std::max(it->second.first, node.depth);
    }
    for (const auto& c : node.children)
        collect_words(c, cd, claim_key, profile, filter, arrival);
}

}  // namespace

OccurrenceProfile word_occurrences(const std::vector<ClaimEntry>& claims,
                                   const WordFilter& filter) {
    OccurrenceProfile profile;
    std::size_t arrival = 0;
    for (const auto& entry : claims)
        collect_words(*entry.tree, entry.claim_depth, entry.claim_key, profile, filter,
                      arrival);
    return profile;
}

}  // namespace juju::spectree
