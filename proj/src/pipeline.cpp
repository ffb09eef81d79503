#include "juju/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "juju/corpus.hpp"
#include "juju/eval.hpp"
#include "juju/parse.hpp"
#include "juju/poscorrect.hpp"
#include "juju/scoring.hpp"
#include "juju/search.hpp"
#include "juju/spectree.hpp"

namespace fs = std::filesystem;

namespace juju::pipeline {

namespace {

std::vector<std::size_t> parse_k_list(const std::string& value) {
    std::vector<std::size_t> ks;
    std::istringstream is(value);
    std::string item;
    while (std::getline(is, item, ','))
        if (!item.empty()) ks.push_back(std::stoul(item));
    if (ks.empty()) throw std::invalid_argument("empty K list");
    return ks;
}

bool parse_bool(const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw std::invalid_argument("expected boolean, got: " + value);
}

}  // namespace

void PipelineConfig::apply(const std::string& key, const std::string& value) {
    if (key == "corpus") corpus_path = value;
    else if (key == "qrels") qrels_path = value;
    else if (key == "parse_forest") parse_forest_path = value;
    else if (key == "embeddings") embeddings_path = value;
    else if (key == "pos_training") pos_training_path = value;
    else if (key == "pos_model") pos_model_path = value;
    else if (key == "variant") {
        if (value != "juju05" && value != "juju06")
            throw std::invalid_argument("variant must be juju05 or juju06");
        variant = value;
    } else if (key == "alpha") { alpha = std::stod(value); alpha_set = true; }
    else if (key == "beta") { beta = std::stod(value); beta_set = true; }
    else if (key == "keywords") keyword_count = std::stoul(value);
    else if (key == "boosting") boosting = parse_bool(value);
    else if (key == "index_field") index_field = value;
    else if (key == "k_list") k_list = parse_k_list(value);
    else if (key == "limit") result_limit = std::stoul(value);
    else if (key == "reference_run") reference_run = value;
    else if (key == "output") output_dir = value;
    else if (key == "seed") seed = std::stoull(value);
    else if (key == "workers") workers = std::stoi(value);
    else if (key == "strict") strict = parse_bool(value);
    else if (key == "mlt_max_terms") mlt_max_terms = std::stoul(value);
    else if (key == "permutations") permutations = std::stoul(value);
    else throw std::invalid_argument("unknown config key: " + key);
}

PipelineConfig PipelineConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    PipelineConfig config;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        auto strip = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        line = strip(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected key=value");
        try {
            config.apply(strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return config;
}

namespace {

scoring::ScoringParams params_for(const PipelineConfig& config, scoring::Variant v) {
    auto p = scoring::ScoringParams::defaults(v);
    if (config.alpha_set) p.alpha = config.alpha;
    if (config.beta_set) p.beta = config.beta;
    return p;
}

void write_manifest(const PipelineConfig& config, const std::string& stage) {
    fs::create_directories(config.output_dir);
    std::ofstream out(fs::path(config.output_dir) / ("manifest_" + stage + ".txt"));
    out << "seed=" << config.seed << "\n"
        << "corpus=" << config.corpus_path << "\n"
        << "variant=" << config.variant << "\n"
        << "keywords=" << config.keyword_count << "\n"
        << "boosting=" << (config.boosting ? "true" : "false") << "\n"
        << "limit=" << config.result_limit << "\n"
        << "reference_run=" << config.reference_run << "\n";
}

struct DocKeywords {
    std::string doc_id;
    scoring::KeywordList juju05;
    scoring::KeywordList juju06;
    bool failed = false;
    std::string error;
};

DocKeywords extract_one(const corpus::PatentDocument& doc,
                        const std::map<parse::ForestKey, parse::ParseTree>* forest,
                        const poscorrect::LinearPosClassifier* classifier,
                        const poscorrect::EmbeddingTable* table,
                        const PipelineConfig& config) {
    DocKeywords out;
    out.doc_id = doc.doc_id;
    std::vector<spectree::SpecNode> trees;
    std::vector<int> depths;
    trees.reserve(doc.claims.size());
    for (const auto& claim : doc.claims) {
        const parse::ParseTree* parsed = nullptr;
        parse::ParseTree corrected;
        if (forest) {
            auto it = forest->find({doc.doc_id, claim.number});
            if (it != forest->end()) {
                corrected = it->second;
                if (classifier && table)
                    poscorrect::correct_tags(corrected, *classifier, *table);
                parsed = &corrected;
            }
        }
        if (parsed) {
            trees.push_back(spectree::build_spec_tree_from_parse(*parsed));
        } else {
            auto tokens = parse::tokenize_claim(claim.text);
            if (tokens.empty()) continue;
            trees.push_back(spectree::build_spec_tree_from_cues(tokens));
        }
        depths.push_back(claim.depth);
    }
    std::vector<spectree::ClaimEntry> entries;
    for (std::size_t i = 0; i < trees.size(); ++i)
        entries.push_back({&trees[i], depths[i], static_cast<int>(i)});
    auto profile = spectree::word_occurrences(entries);
    auto records = scoring::aggregate_stems(profile);
    out.juju05 = scoring::extract_keywords(records, params_for(config, scoring::Variant::JUJU05),
                                           config.keyword_count);
    out.juju06 = scoring::extract_keywords(records, params_for(config, scoring::Variant::JUJU06),
                                           config.keyword_count);
    return out;
}

void write_keywords_csv(const std::string& doc_id, const scoring::KeywordList& list,
                        const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write keyword file: " + path.string());
    out << "doc_id,rank,word,score\n";
    std::size_t rank = 1;
    for (const auto& kw : list.keywords) {
        out << doc_id << "," << rank << "," << kw.word << "," << std::fixed
            << std::setprecision(9) << kw.score << "\n";
        ++rank;
    }
}

std::vector<corpus::PatentDocument> load_docs(const PipelineConfig& config) {
    if (config.corpus_path.empty())
        throw std::runtime_error("no corpus configured (corpus=...)");
    corpus::LoadReport report;
    auto docs = corpus::load_corpus(config.corpus_path, &report, config.strict);
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
    return docs;
}

struct KeywordRow {
    std::size_t rank;
    std::string word;
    double score;
};

std::vector<KeywordRow> read_keywords_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("missing keyword file: " + path.string() +
                                      " (run the extract stage first)");
    std::vector<KeywordRow> rows;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream is(line);
        std::string doc_id, rank, word, score;
        std::getline(is, doc_id, ',');
        std::getline(is, rank, ',');
        std::getline(is, word, ',');
        std::getline(is, score, ',');
        rows.push_back({std::stoul(rank), word, std::stod(score)});
    }
    return rows;
}

search::Query keyword_query(const std::vector<KeywordRow>& rows, const std::string& topic_id,
                            bool boosting, std::size_t limit) {
    search::Query query;
    query.topic_id = topic_id;
    query.limit = limit;
    double max_score = 0.0;
    for (const auto& r : rows) max_score = std::max(max_score, r.score);
    std::set<std::string> seen;
    for (const auto& r : rows) {
        std::string stem = scoring::porter_stem(r.word);
        if (!seen.insert(stem).second) continue;  // keep the highest-ranked surface form
        double boost = boosting && max_score > 0.0 ? r.score / max_score : 1.0;
        query.terms.push_back({stem, boost});
    }
    return query;
}

std::vector<std::string> topic_ids(const corpus::QrelSet& qrels,
                                   const std::vector<corpus::PatentDocument>& docs) {
    std::vector<std::string> topics;
    for (const auto& [topic, relevant] : qrels.relevant) {
        if (relevant.empty()) continue;
        for (const auto& d : docs)
            if (d.doc_id == topic) {
                topics.push_back(topic);
                break;
            }
    }
    return topics;
}

std::vector<std::string> run_names(const PipelineConfig& config) {
    std::vector<std::string> names = {"juju05", "juju06"};
    if (config.boosting) {
        names.push_back("juju05_boost");
        names.push_back("juju06_boost");
    }
    names.push_back("tfidf");
    names.push_back("mlt");
    return names;
}

}  // namespace

int cmd_stats(const PipelineConfig& config) {
    auto docs = load_docs(config);
    auto stats = corpus::corpus_stats(docs, [](const std::string& text) {
        std::vector<std::string> words;
        for (const auto& t : parse::tokenize_claim(text)) words.push_back(t.surface);
        return words;
    });
    fs::create_directories(config.output_dir);
    {
        std::ofstream out(fs::path(config.output_dir) / "stats_sentence_lengths.csv");
        out << "length,count\n";
        for (const auto& [len, count] : stats.sentence_length_histogram)
            out << len << "," << count << "\n";
    }
    {
        std::ofstream out(fs::path(config.output_dir) / "stats_summary.csv");
        double mean_flesch = 0.0;
        for (double f : stats.flesch_scores) mean_flesch += f;
        if (!stats.flesch_scores.empty())
            mean_flesch /= static_cast<double>(stats.flesch_scores.size());
        out << "measure,value\n";
        out << std::fixed << std::setprecision(6);
        out << "documents," << docs.size() << "\n";
        out << "sentences," << stats.flesch_scores.size() << "\n";
        out << "mean_flesch_reading_ease," << mean_flesch << "\n";
        out << "claim_split_rate," << stats.claim_split_rate << "\n";
        out << "empty_claims," << stats.empty_claims << "\n";
    }
    write_manifest(config, "stats");
    return 0;
}

int cmd_train_pos(const PipelineConfig& config) {
    if (config.embeddings_path.empty() || config.pos_training_path.empty())
        throw std::runtime_error("train-pos needs embeddings= and pos_training=");
    auto table = poscorrect::EmbeddingTable::load(config.embeddings_path);
    auto samples = poscorrect::load_training_file(config.pos_training_path);
    poscorrect::LinearPosClassifier::TrainConfig train_config;
    train_config.seed = static_cast<unsigned>(config.seed);
    auto [classifier, result] = poscorrect::LinearPosClassifier::train(samples, table,
                                                                       train_config);
    if (result.degenerate)
        std::cerr << "warning: single-class training data, degenerate classifier\n";
    std::cout << "train accuracy " << result.train_accuracy << ", test accuracy "
              << result.test_accuracy << "\n";
    fs::create_directories(config.output_dir);
    std::string model_path = config.pos_model_path.empty()
                                 ? (fs::path(config.output_dir) / "pos_model.txt").string()
                                 : config.pos_model_path;
    classifier.save(model_path);
    write_manifest(config, "train_pos");
    return 0;
}

int cmd_extract(const PipelineConfig& config) {
    auto docs = load_docs(config);
    std::map<parse::ForestKey, parse::ParseTree> forest;
    bool have_forest = !config.parse_forest_path.empty();
    if (have_forest) {
        std::vector<std::string> warnings;
        forest = parse::read_ptb_forest(config.parse_forest_path, &warnings);
        for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    } else {
        std::cerr << "note: no parse forest configured, using cue-based builder\n";
    }
    std::optional<poscorrect::EmbeddingTable> table;
    std::optional<poscorrect::LinearPosClassifier> classifier;
    if (!config.pos_model_path.empty() && !config.embeddings_path.empty()) {
        table = poscorrect::EmbeddingTable::load(config.embeddings_path);
        classifier = poscorrect::LinearPosClassifier::load(config.pos_model_path);
    }

    std::vector<DocKeywords> results(docs.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(std::max(config.workers, 1))
#endif
    for (std::size_t i = 0; i < docs.size(); ++i) {
        try {
            results[i] = extract_one(docs[i], have_forest ? &forest : nullptr,
                                     classifier ? &*classifier : nullptr,
                                     table ? &*table : nullptr, config);
        } catch (const std::exception& e) {
            results[i].doc_id = docs[i].doc_id;
            results[i].failed = true;
            results[i].error = e.what();
        }
    }

    fs::path base(config.output_dir);
    fs::create_directories(base / "keywords" / "juju05");
    fs::create_directories(base / "keywords" / "juju06");
    std::size_t failures = 0;
    for (const auto& r : results) {
        if (r.failed) {
            ++failures;
            std::cerr << "error: " << r.doc_id << ": " << r.error << "\n";
            continue;
        }
        write_keywords_csv(r.doc_id, r.juju05,
                           base / "keywords" / "juju05" / (r.doc_id + ".csv"));
        write_keywords_csv(r.doc_id, r.juju06,
                           base / "keywords" / "juju06" / (r.doc_id + ".csv"));
    }
    write_manifest(config, "extract");
    if (!docs.empty() && 10 * failures > docs.size()) {
        std::cerr << "error: " << failures << " of " << docs.size()
                  << " documents failed keyword extraction\n";
        return 1;
    }
    return 0;
}

int cmd_index(const PipelineConfig& config) {
    auto docs = load_docs(config);
    std::vector<std::string> warnings;
    auto field = config.index_field == "fulltext" ? search::IndexField::FULLTEXT
                                                  : search::IndexField::CLAIMS;
    auto index = search::InvertedIndex::build(docs, field, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    fs::create_directories(config.output_dir);
    index.save((fs::path(config.output_dir) / "index.snapshot").string());
    write_manifest(config, "index");
    return 0;
}

int cmd_search(const PipelineConfig& config) {
    if (config.qrels_path.empty())
        throw std::runtime_error("no qrels configured (qrels=...)");
    fs::path base(config.output_dir);
    fs::path snapshot = base / "index.snapshot";
    if (!fs::exists(snapshot))
        throw std::runtime_error("missing index snapshot: " + snapshot.string() +
                                 " (run the index stage first)");
    auto index = search::InvertedIndex::load(snapshot.string());
    auto docs = load_docs(config);
    auto qrels = corpus::load_qrels(config.qrels_path);
    auto topics = topic_ids(qrels, docs);

    fs::create_directories(base / "runs");
    for (const auto& name : run_names(config)) {
        std::vector<search::Query> queries;
        for (const auto& topic : topics) {
            const corpus::PatentDocument* doc = nullptr;
            for (const auto& d : docs)
                if (d.doc_id == topic) doc = &d;
            if (name == "mlt") {
                std::string text;
                for (const auto& c : doc->claims) {
                    text += c.text;
                    text += ' ';
                }
                auto q = search::mlt_baseline(index, text, config.mlt_max_terms);
                q.topic_id = topic;
                q.limit = config.result_limit;
                queries.push_back(std::move(q));
            } else if (name == "tfidf") {
                auto q = search::tfidf_keyword_baseline(index, *doc, config.keyword_count);
                q.limit = config.result_limit;
                queries.push_back(std::move(q));
            } else {
                bool boosted = name.ends_with("_boost");
                std::string variant = name.substr(0, 6);  // juju05 / juju06
                auto rows = read_keywords_csv(base / "keywords" / variant / (topic + ".csv"));
                queries.push_back(keyword_query(rows, topic, boosted, config.result_limit));
            }
        }
        auto results = search::execute_queries(index, queries, name, {}, config.workers);
        search::write_run_file(results, (base / "runs" / (name + ".run")).string());
    }
    write_manifest(config, "search");
    return 0;
}

int cmd_eval(const PipelineConfig& config) {
    if (config.qrels_path.empty())
        throw std::runtime_error("no qrels configured (qrels=...)");
    fs::path base(config.output_dir);
    auto qrels = corpus::load_qrels(config.qrels_path);
    auto docs = load_docs(config);

    std::vector<std::vector<search::RunResult>> all_runs;
    std::vector<std::string> names;
    for (const auto& name : run_names(config)) {
        fs::path run_path = base / "runs" / (name + ".run");
        if (!fs::exists(run_path))
            throw std::runtime_error("missing run file: " + run_path.string() +
                                     " (run the search stage first)");
        all_runs.push_back(search::read_run_file(run_path.string()));
        names.push_back(name);
    }

    std::vector<eval::RunEvaluation> evals;
    for (std::size_t i = 0; i < all_runs.size(); ++i)
        evals.push_back(eval::evaluate_run(all_runs[i], qrels, config.k_list, names[i]));

    auto rows = eval::leaderboard(evals, config.reference_run, 0.05, config.seed,
                                  config.permutations);
    eval::write_leaderboard_csv(rows, (base / "leaderboard.csv").string());

    eval::write_heatmap_csv(eval::domain_heatmap(evals, docs),
                            (base / "heatmap_pres.csv").string());
    eval::write_heatmap_csv(eval::first_hit_heatmap(all_runs, names, qrels, docs),
                            (base / "heatmap_first_hit.csv").string());

    {
        std::ofstream out(base / "first_hit.csv");
        out << "run,bin_start,count,cumulative_pct,median,pct80\n";
        for (std::size_t i = 0; i < all_runs.size(); ++i) {
            auto stats = eval::first_hit_stats(all_runs[i], qrels.relevant, 10,
                                               config.result_limit);
            if (stats.eligible_topics == 0) {
                std::cerr << "warning: no eligible topics for first-hit stats of "
                          << names[i] << "\n";
                continue;
            }
            std::size_t b = 0;
            for (const auto& [bin, count] : stats.histogram) {
                out << names[i] << "," << bin << "," << count << "," << std::fixed
                    << std::setprecision(2) << stats.cumulative_pct[b] << ","
                    << stats.median << "," << stats.pct80 << "\n";
                ++b;
            }
        }
    }
    write_manifest(config, "eval");
    return 0;
}

int cmd_all(const PipelineConfig& config) {
    if (int rc = cmd_extract(config)) return rc;
    if (int rc = cmd_index(config)) return rc;
    if (int rc = cmd_search(config)) return rc;
    return cmd_eval(config);
}

}  // namespace juju::pipeline
