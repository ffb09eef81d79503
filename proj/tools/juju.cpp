#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "juju/pipeline.hpp"

using juju::pipeline::PipelineConfig;

int main(int argc, char** argv) {
    CLI::App app{"Patent claim keyword extraction and retrieval evaluation toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    PipelineConfig overrides;
    bool workers_set = false, seed_set = false, strict_set = false, output_set = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "config file (flat key=value)");
        sub->add_option("--workers", overrides.workers, "worker thread count")
            ->each([&](const std::string&) { workers_set = true; });
        sub->add_option("--seed", overrides.seed, "random seed, recorded in outputs")
            ->each([&](const std::string&) { seed_set = true; });
        sub->add_flag("--strict", overrides.strict, "abort on the first malformed record")
            ->each([&](const std::string&) { strict_set = true; });
        sub->add_option("--output", overrides.output_dir, "output directory")
            ->each([&](const std::string&) { output_set = true; });
        // every config key is also a flag of the same name
        for (const char* key :
             {"corpus", "qrels", "parse_forest", "embeddings", "pos_training", "pos_model",
              "variant", "alpha", "beta", "keywords", "boosting", "index_field", "k_list",
              "limit", "reference_run", "mlt_max_terms", "permutations"}) {
            sub->add_option_function<std::string>(
                std::string("--") + key,
                [&overrides, key = std::string(key)](const std::string& value) {
                    overrides.apply(key, value);
                },
                "config override");
        }
    };

    for (const char* name :
         {"extract", "train-pos", "index", "search", "eval", "stats", "all"})
        add_common(app.add_subcommand(name));

    CLI11_PARSE(app, argc, argv);

    try {
        PipelineConfig config;
        if (!config_path.empty()) config = PipelineConfig::load(config_path);
        // command-line values win over the config file
        if (workers_set) config.workers = overrides.workers;
        if (seed_set) config.seed = overrides.seed;
        if (strict_set) config.strict = overrides.strict;
        if (output_set) config.output_dir = overrides.output_dir;
        if (!overrides.corpus_path.empty()) config.corpus_path = overrides.corpus_path;
        if (!overrides.qrels_path.empty()) config.qrels_path = overrides.qrels_path;
        if (!overrides.parse_forest_path.empty())
            config.parse_forest_path = overrides.parse_forest_path;
        if (!overrides.embeddings_path.empty())
            config.embeddings_path = overrides.embeddings_path;
        if (!overrides.pos_training_path.empty())
            config.pos_training_path = overrides.pos_training_path;
        if (!overrides.pos_model_path.empty())
            config.pos_model_path = overrides.pos_model_path;
        if (overrides.variant != "juju06") config.variant = overrides.variant;
        if (overrides.alpha_set) { config.alpha = overrides.alpha; config.alpha_set = true; }
        if (overrides.beta_set) { config.beta = overrides.beta; config.beta_set = true; }
        if (overrides.keyword_count != 100) config.keyword_count = overrides.keyword_count;
        if (overrides.boosting) config.boosting = true;
        if (overrides.index_field != "claims") config.index_field = overrides.index_field;
        if (overrides.k_list != std::vector<std::size_t>{10, 50, 100, 500, 1000})
            config.k_list = overrides.k_list;
        if (overrides.result_limit != 1000) config.result_limit = overrides.result_limit;
        if (overrides.reference_run != "mlt") config.reference_run = overrides.reference_run;
        if (overrides.mlt_max_terms != 25) config.mlt_max_terms = overrides.mlt_max_terms;
        if (overrides.permutations != 100000) config.permutations = overrides.permutations;

        const std::string sub = app.get_subcommands().front()->get_name();
        if (sub == "extract") return juju::pipeline::cmd_extract(config);
        if (sub == "train-pos") return juju::pipeline::cmd_train_pos(config);
        if (sub == "index") return juju::pipeline::cmd_index(config);
        if (sub == "search") return juju::pipeline::cmd_search(config);
        if (sub == "eval") return juju::pipeline::cmd_eval(config);
        if (sub == "stats") return juju::pipeline::cmd_stats(config);
        if (sub == "all") return juju::pipeline::cmd_all(config);
        std::cerr << "unknown subcommand: " << sub << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
