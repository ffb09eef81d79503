#include "juju/search.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "juju/parse.hpp"
#include "juju/scoring.hpp"
#include "juju/spectree.hpp"

namespace juju::search {

std::vector<std::string> analyze(const std::string& text) {
    std::vector<std::string> stems;
    for (const auto& tok : parse::tokenize_claim(text)) {
        std::string w = tok.surface;
        std::transform(w.begin(), w.end(), w.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (w.size() < 2) continue;
        if (!std::all_of(w.begin(), w.end(),
                         [](unsigned char c) { return std::islower(c); }))
            continue;
        if (spectree::default_stopwords().count(w)) continue;
        stems.push_back(scoring::porter_stem(w));
    }
    return stems;
}

InvertedIndex InvertedIndex::build(const std::vector<corpus::PatentDocument>& docs,
                                   IndexField field, std::vector<std::string>* warnings) {
    if (field == IndexField::FULLTEXT && warnings)
        warnings->push_back(
            "fulltext field requested but documents carry claims only; "
            "falling back to claims");
    InvertedIndex index;
    std::map<std::string, std::vector<Posting>> postings;
    std::size_t total_len = 0;
    for (const auto& doc : docs) {
        std::uint32_t id = static_cast<std::uint32_t>(index.doc_ids_.size());
        index.doc_ids_.push_back(doc.doc_id);
        std::map<std::string, std::uint32_t> tf;
        std::size_t len = 0;
        for (const auto& claim : doc.claims)
            for (const auto& stem : analyze(claim.text)) {
                ++tf[stem];
                ++len;
            }
        index.doc_lengths_.push_back(len);
        total_len += len;
        for (const auto& [term, freq] : tf) postings[term].push_back({id, freq});
    }
    index.avg_len_ = index.doc_ids_.empty()
                         ? 0.0
                         : static_cast<double>(total_len) /
                               static_cast<double>(index.doc_ids_.size());
    index.vocab_.reserve(postings.size());
    for (auto& [term, plist] : postings) {
        index.term_ids_[term] = index.vocab_.size();
        index.vocab_.push_back(term);
        index.postings_.push_back(std::move(plist));
    }
    return index;
}

std::size_t InvertedIndex::document_frequency(const std::string& term) const {
    auto it = term_ids_.find(term);
    return it == term_ids_.end() ? 0 : postings_[it->second].size();
}

const std::vector<Posting>* InvertedIndex::postings(const std::string& term) const {
    auto it = term_ids_.find(term);
    return it == term_ids_.end() ? nullptr : &postings_[it->second];
}

void InvertedIndex::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write index snapshot: " + path);
    out << "juju-index 1\n";
    out << doc_ids_.size() << "\n";
    out.precision(17);
    for (std::size_t i = 0; i < doc_ids_.size(); ++i)
        out << doc_ids_[i] << " " << doc_lengths_[i] << "\n";
    out << vocab_.size() << "\n";
    for (std::size_t t = 0; t < vocab_.size(); ++t) {
        out << vocab_[t] << " " << postings_[t].size();
        for (const auto& p : postings_[t]) out << " " << p.doc << ":" << p.tf;
        out << "\n";
    }
}

InvertedIndex InvertedIndex::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open index snapshot: " + path);
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (magic != "juju-index" || version != 1)
        throw std::runtime_error("unrecognized index snapshot: " + path);
    InvertedIndex index;
    std::size_t n_docs = 0;
    in >> n_docs;
    index.doc_ids_.resize(n_docs);
    index.doc_lengths_.resize(n_docs);
    std::size_t total_len = 0;
    for (std::size_t i = 0; i < n_docs; ++i) {
        in >> index.doc_ids_[i] >> index.doc_lengths_[i];
        total_len += index.doc_lengths_[i];
    }
    index.avg_len_ =
        n_docs == 0 ? 0.0 : static_cast<double>(total_len) / static_cast<double>(n_docs);
    std::size_t n_terms = 0;
    in >> n_terms;
    index.vocab_.resize(n_terms);
    index.postings_.resize(n_terms);
    for (std::size_t t = 0; t < n_terms; ++t) {
        std::size_t n_postings = 0;
        in >> index.vocab_[t] >> n_postings;
        index.term_ids_[index.vocab_[t]] = t;
        index.postings_[t].resize(n_postings);
        for (auto& p : index.postings_[t]) {
            char colon;
            in >> p.doc >> colon >> p.tf;
        }
    }
    if (!in) throw std::runtime_error("truncated index snapshot: " + path);
    return index;
}

std::uint64_t InvertedIndex::checksum() const {
    // FNV-1a over the snapshot serialization
    std::ostringstream os;
    os << doc_ids_.size() << "|" << avg_len_ << "|";
    for (std::size_t i = 0; i < doc_ids_.size(); ++i)
        os << doc_ids_[i] << ":" << doc_lengths_[i] << "|";
    for (std::size_t t = 0; t < vocab_.size(); ++t) {
        os << vocab_[t];
        for (const auto& p : postings_[t]) os << "," << p.doc << ":" << p.tf;
        os << "|";
    }
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : os.str()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

double bm25_idf(std::size_t df, std::size_t n_docs) {
    // non-negative variant: log(1 + (N - df + 0.5) / (df + 0.5))
    return std::log(1.0 + (static_cast<double>(n_docs) - static_cast<double>(df) + 0.5) /
                              (static_cast<double>(df) + 0.5));
}

}  // namespace

RunResult execute_query(const InvertedIndex& index, const Query& query,
                        const Bm25Params& params) {
    RunResult result;
    result.topic_id = query.topic_id;
    if (query.terms.empty()) return result;

    std::vector<double> scores(index.doc_count(), 0.0);
    std::vector<bool> touched(index.doc_count(), false);
    for (const auto& term : query.terms) {
        const auto* plist = index.postings(term.stem);
        if (!plist) continue;
        double idf = bm25_idf(plist->size(), index.doc_count());
        for (const auto& p : *plist) {
            double tf = static_cast<double>(p.tf);
            double norm_len = index.avg_doc_length() > 0.0
                                  ? static_cast<double>(index.doc_length(p.doc)) /
                                        index.avg_doc_length()
                                  : 0.0;
            double w = idf * tf * (params.k1 + 1.0) /
                       (tf + params.k1 * (1.0 - params.b + params.b * norm_len));
            scores[p.doc] += term.boost * w;
            touched[p.doc] = true;
        }
    }

    std::vector<std::uint32_t> matched;
    for (std::uint32_t d = 0; d < index.doc_count(); ++d)
        if (touched[d] && index.doc_id(d) != query.topic_id) matched.push_back(d);
    std::sort(matched.begin(), matched.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return index.doc_id(a) < index.doc_id(b);
    });
    if (matched.size() > query.limit) matched.resize(query.limit);
    result.hits.reserve(matched.size());
    for (std::uint32_t d : matched) result.hits.push_back({index.doc_id(d), scores[d]});
    return result;
}

std::vector<RunResult> execute_queries(const InvertedIndex& index,
                                       const std::vector<Query>& queries,
                                       const std::string& run_name,
                                       const Bm25Params& params, int threads) {
    std::vector<RunResult> results(queries.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(std::max(threads, 1))
#endif
    for (std::size_t i = 0; i < queries.size(); ++i) {
        results[i] = execute_query(index, queries[i], params);
        results[i].run_name = run_name;
    }
    return results;
}

namespace {

Query top_tfidf_terms(const InvertedIndex& index, const std::string& text,
                      std::size_t max_terms) {
    std::map<std::string, std::size_t> tf;
    std::vector<std::string> order;
    for (const auto& stem : analyze(text)) {
        auto [it, inserted] = tf.try_emplace(stem, 0);
        if (inserted) order.push_back(stem);
        ++it->second;
    }
    struct Weighted {
        std::string stem;
        double weight;
        std::size_t arrival;
    };
    std::vector<Weighted> candidates;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto& stem = order[i];
        std::size_t df = index.document_frequency(stem);
        if (df == 0) continue;  // not in the index
        double idf = std::log(static_cast<double>(index.doc_count()) /
                              static_cast<double>(df));
        candidates.push_back({stem, static_cast<double>(tf[stem]) * idf, i});
    }
    std::sort(candidates.begin(), candidates.end(), [](const Weighted& a, const Weighted& b) {
        if (a.weight != b.weight) return a.weight > b.weight;
        return a.arrival < b.arrival;
    });
    if (candidates.size() > max_terms) candidates.resize(max_terms);
    Query query;
    for (const auto& c : candidates) query.terms.push_back({c.stem, 1.0});
    return query;
}

}  // namespace

Query mlt_baseline(const InvertedIndex& index, const std::string& source_text,
                   std::size_t max_terms) {
    return top_tfidf_terms(index, source_text, max_terms);
}

Query tfidf_keyword_baseline(const InvertedIndex& index,
                             const corpus::PatentDocument& doc, std::size_t n) {
    std::string text;
    for (const auto& claim : doc.claims) {
        text += claim.text;
        text += ' ';
    }
    Query q = top_tfidf_terms(index, text, n);
    q.topic_id = doc.doc_id;
    return q;
}

void write_run_file(const std::vector<RunResult>& results, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write run file: " + path);
    for (const auto& r : results) {
        std::size_t rank = 1;
        for (const auto& hit : r.hits) {
            out << r.topic_id << " Q0 " << hit.doc_id << " " << rank << " " << std::fixed
                << std::setprecision(6) << hit.score << " " << r.run_name << "\n";
            ++rank;
        }
    }
    if (!out) throw std::runtime_error("write failure: " + path);
}

std::vector<RunResult> read_run_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open run file: " + path);
    std::vector<RunResult> results;
    std::string topic, q0, doc, run;
    std::size_t rank;
    double score;
    while (in >> topic >> q0 >> doc >> rank >> score >> run) {
        if (results.empty() || results.back().topic_id != topic) {
            results.push_back(RunResult{topic, {}, run});
        }
        results.back().hits.push_back({doc, score});
    }
    return results;
}

}  // namespace juju::search
