#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace juju::pipeline {

struct PipelineConfig {
    std::string corpus_path;
    std::string qrels_path;
    std::string parse_forest_path;   // optional; cue builder used when empty
    std::string embeddings_path;     // optional
    std::string pos_training_path;   // optional
    std::string pos_model_path;      // optional, produced by train-pos
    std::string variant = "juju06";  // juju05 | juju06
    double alpha = 1.0;
    double beta = 2.0;
    bool alpha_set = false, beta_set = false;
    std::size_t keyword_count = 100;
    bool boosting = false;
    std::string index_field = "claims";  // claims | fulltext
    std::vector<std::size_t> k_list = {10, 50, 100, 500, 1000};
    std::size_t result_limit = 1000;
    std::string reference_run = "mlt";
    std::string output_dir = "out";
    std::uint64_t seed = 1;
    int workers = 1;
    bool strict = false;
    std::size_t mlt_max_terms = 25;
    std::size_t permutations = 100000;

    // Flat key=value file, '#' comments. Unknown keys are an error.
    static PipelineConfig load(const std::string& path);
    void apply(const std::string& key, const std::string& value);
};

// Subcommand bodies; each returns a process exit code.
int cmd_stats(const PipelineConfig& config);
int cmd_extract(const PipelineConfig& config);
int cmd_train_pos(const PipelineConfig& config);
int cmd_index(const PipelineConfig& config);
int cmd_search(const PipelineConfig& config);
int cmd_eval(const PipelineConfig& config);
int cmd_all(const PipelineConfig& config);

}  // namespace juju::pipeline
