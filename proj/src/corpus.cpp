#include "juju/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace juju::corpus {

const Claim* PatentDocument::find_claim(int number) const {
    for (const auto& c : claims)
        if (c.number == number) return &c;
    return nullptr;
}

namespace {

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

struct WordScanner {
    std::vector<std::string> words;
    std::vector<std::size_t> starts;

    explicit WordScanner(const std::string& text) {
        std::size_t i = 0;
        while (i < text.size()) {
            if (is_word_char(text[i])) {
                std::size_t j = i;
                while (j < text.size() && is_word_char(text[j])) ++j;
                std::string w = text.substr(i, j - i);
                std::transform(w.begin(), w.end(), w.begin(),
                               [](unsigned char c) { return std::tolower(c); });
                words.push_back(std::move(w));
                starts.push_back(i);
                i = j;
            } else {
                ++i;
            }
        }
    }
};

bool all_digits(const std::string& w) {
    return !w.empty() && std::all_of(w.begin(), w.end(), [](unsigned char c) {
        return std::isdigit(c) != 0;
    });
}

}  // namespace

std::set<int> extract_claim_refs(const std::string& text, int self_number) {
    std::set<int> refs;
    WordScanner scan(text);
    const auto& w = scan.words;
    auto add = [&](int n) {
        if (n >= 1 && n != self_number) refs.insert(n);
    };
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] != "claim" && w[i] != "claims") continue;
        std::size_t j = i + 1;
        if (j >= w.size() || !all_digits(w[j])) {
            // "any of the preceding claims" with no number list
            if (w[i] == "claims" && i >= 1 && w[i - 1] == "preceding") {
                for (int n = 1; n < self_number; ++n) refs.insert(n);
            }
            continue;
        }
        int first = std::stoi(w[j]);
        ++j;
        if (j + 1 < w.size() && (w[j] == "to" || w[j] == "through") && all_digits(w[j + 1])) {
            int last = std::stoi(w[j + 1]);
            for (int n = first; n <= last; ++n) add(n);
            i = j + 1;
            continue;
        }
        add(first);
        // enumerations: "claims 3, 5 and 7"
        while (j < w.size()) {
            if (w[j] == "and" || w[j] == "or") {
                ++j;
                continue;
            }
            if (all_digits(w[j])) {
                add(std::stoi(w[j]));
                ++j;
            } else {
                break;
            }
        }
        i = j - 1;
    }
    return refs;
}

namespace {

int depth_of(const PatentDocument& doc, int number, std::map<int, int>& memo,
             std::set<int>& in_progress) {
    if (auto it = memo.find(number); it != memo.end()) return it->second;
    const Claim* c = doc.find_claim(number);
    if (!c)
        throw corpus_error("unknown claim number " + std::to_string(number) + " in " +
                           doc.doc_id);
    if (in_progress.count(number)) {
        std::ostringstream os;
        os << "claim reference cycle in " << doc.doc_id << " involving claims {";
        for (int n : in_progress) os << " " << n;
        os << " }";
        throw corpus_error(os.str());
    }
    if (c->parent_refs.empty()) {
        memo[number] = 0;
        return 0;
    }
    in_progress.insert(number);
    int best = -1;
    for (int p : c->parent_refs) {
        int d = depth_of(doc, p, memo, in_progress);
        if (best < 0 || d < best) best = d;
    }
    in_progress.erase(number);
    memo[number] = best + 1;
    return best + 1;
}

}  // namespace

int claim_depth(const PatentDocument& doc, int number) {
    std::map<int, int> memo;
    std::set<int> in_progress;
    return depth_of(doc, number, memo, in_progress);
}

std::vector<PatentDocument> load_corpus(const std::string& path, LoadReport* report,
                                        bool strict) {
    std::ifstream in(path);
    if (!in) throw corpus_error("cannot open corpus file: " + path);
    std::vector<PatentDocument> docs;
    std::string line;
    std::size_t lineno = 0;
    auto problem = [&](const std::string& msg) {
        std::string full = path + ":" + std::to_string(lineno) + ": " + msg;
        if (strict) throw corpus_error(full);
        if (report) {
            report->warnings.push_back(full);
            ++report->skipped;
        }
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            problem("malformed JSON record");
            continue;
        }
        try {
            PatentDocument doc;
            doc.doc_id = j.at("doc_id").get<std::string>();
            doc.lang = j.value("lang", std::string("en"));
            if (j.contains("cpc")) doc.cpc_codes = j["cpc"].get<std::vector<std::string>>();
            if (doc.doc_id.empty()) {
                problem("empty doc_id");
                continue;
            }
            std::set<int> numbers;
            for (const auto& cj : j.at("claims")) {
                Claim c;
                c.number = cj.at("num").get<int>();
                c.text = cj.at("text").get<std::string>();
                if (c.number < 1 || !numbers.insert(c.number).second)
                    throw corpus_error("invalid or duplicate claim number " +
                                       std::to_string(c.number));
                doc.claims.push_back(std::move(c));
            }
            for (auto& c : doc.claims) {
                for (int r : extract_claim_refs(c.text, c.number)) {
                    if (r >= c.number) {
                        if (report)
                            report->warnings.push_back(doc.doc_id + " claim " +
                                                       std::to_string(c.number) +
                                                       ": forward reference to claim " +
                                                       std::to_string(r) + " dropped");
                        continue;
                    }
                    if (numbers.count(r)) c.parent_refs.insert(r);
                }
            }
            for (auto& c : doc.claims) c.depth = claim_depth(doc, c.number);
            docs.push_back(std::move(doc));
        } catch (const std::exception& e) {
            problem(e.what());
        }
    }
    return docs;
}

std::string QrelSet::serialize() const {
    std::string out;
    for (const auto& e : entries) {
        out += e.topic_id;
        out += '\t';
        out += e.doc_id;
        out += '\t';
        out += e.code;
        out += '\n';
    }
    return out;
}

QrelSet load_qrels(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw corpus_error("cannot open qrels file: " + path);
    QrelSet qrels;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto t1 = line.find('\t');
        auto t2 = line.find('\t', t1 == std::string::npos ? t1 : t1 + 1);
        if (t1 == std::string::npos || t2 == std::string::npos || t2 + 2 != line.size())
            throw corpus_error(path + ":" + std::to_string(lineno) + ": malformed qrels line");
        QrelEntry e;
        e.topic_id = line.substr(0, t1);
        e.doc_id = line.substr(t1 + 1, t2 - t1 - 1);
        e.code = line[t2 + 1];
        if (e.topic_id.empty() || e.doc_id.empty())
            throw corpus_error(path + ":" + std::to_string(lineno) + ": empty id field");
        ++qrels.code_counts[e.code];
        if (e.code == 'X') qrels.relevant[e.topic_id].insert(e.doc_id);
        qrels.entries.push_back(std::move(e));
    }
    return qrels;
}

std::size_t count_syllables(const std::string& word) {
    auto is_vowel = [](char c) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
    };
    std::size_t groups = 0;
    bool in_group = false;
    for (char c : word) {
        bool v = is_vowel(c);
        if (v && !in_group) ++groups;
        in_group = v;
    }
    // terminal silent 'e'
    if (word.size() >= 2 && std::tolower(static_cast<unsigned char>(word.back())) == 'e' &&
        !is_vowel(word[word.size() - 2]) && groups > 1)
        --groups;
    return std::max<std::size_t>(groups, 1);
}

double flesch_reading_ease(std::size_t words, std::size_t syllables) {
    if (words == 0) return 0.0;
    return 206.835 - 1.015 * static_cast<double>(words) -
           84.6 * (static_cast<double>(syllables) / static_cast<double>(words));
}

std::size_t naive_sentence_count(const std::string& text) {
    // a terminator followed by whitespace and an upper-case letter or digit
    std::size_t count = 1;
    for (std::size_t i = 0; i + 1 < text.size(); ++i) {
        char c = text[i];
        if (c != '.' && c != '!' && c != '?') continue;
        std::size_t j = i + 1;
        if (!std::isspace(static_cast<unsigned char>(text[j]))) continue;
        while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        if (j < text.size() && (std::isupper(static_cast<unsigned char>(text[j])) ||
                                std::isdigit(static_cast<unsigned char>(text[j]))))
            ++count;
    }
    return count;
}

CorpusStats corpus_stats(const std::vector<PatentDocument>& docs,
                         const WordTokenizer& tokenizer) {
    CorpusStats stats;
    std::size_t total_claims = 0, split_claims = 0;
    for (const auto& doc : docs) {
        for (const auto& claim : doc.claims) {
            auto words = tokenizer(claim.text);
            std::erase_if(words, [](const std::string& w) {
                return w.empty() || !std::isalpha(static_cast<unsigned char>(w[0]));
            });
            if (words.empty()) {
                ++stats.empty_claims;
                continue;
            }
            ++total_claims;
            ++stats.sentence_length_histogram[words.size()];
            std::size_t syllables = 0;
            for (const auto& w : words) syllables += count_syllables(w);
            stats.flesch_scores.push_back(flesch_reading_ease(words.size(), syllables));
            if (naive_sentence_count(claim.text) > 1) ++split_claims;
        }
    }
    stats.claim_split_rate =
        total_claims == 0 ? 0.0
                          : static_cast<double>(split_claims) / static_cast<double>(total_claims);
    return stats;
}

}  // namespace juju::corpus
