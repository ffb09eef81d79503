#pragma once

#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "juju/parse.hpp"

namespace juju::poscorrect {

class EmbeddingTable {
public:
    explicit EmbeddingTable(std::size_t dimension)
        : dim_(dimension), zero_(dimension, 0.0) {}

    static EmbeddingTable load(const std::string& path);

    std::size_t dimension() const { return dim_; }
    void insert(const std::string& word, std::vector<double> vec);
    // Out-of-vocabulary words map to the zero vector.
    const std::vector<double>& lookup(const std::string& word) const;

private:
    std::size_t dim_;
    std::unordered_map<std::string, std::vector<double>> table_;
    std::vector<double> zero_ = {};
};

struct TrigramSample {
    std::string left, center, right;
    std::string gold_tag;
};

// Concatenated trigram embeddings, length 3 * dimension.
std::vector<double> featurize(const std::string& left, const std::string& center,
                              const std::string& right, const EmbeddingTable& table);

// One-vs-rest linear max-margin classifier, trained by seeded stochastic
// subgradient descent on L2-regularized hinge loss.
class LinearPosClassifier {
public:
    struct TrainConfig {
        double split_ratio = 0.8;
        unsigned seed = 1;
        int epochs = 10;
        double learning_rate = 0.1;
        double l2 = 1e-4;
    };

    struct TrainResult {
        double train_accuracy = 0.0;
        double test_accuracy = 0.0;
        bool degenerate = false;  // single-class data
    };

    static std::pair<LinearPosClassifier, TrainResult> train(
        const std::vector<TrigramSample>& samples, const EmbeddingTable& table,
        const TrainConfig& config);
    static std::pair<LinearPosClassifier, TrainResult> train(
        const std::vector<TrigramSample>& samples, const EmbeddingTable& table) {
        return train(samples, table, TrainConfig());
    }

    const std::string& predict(const std::vector<double>& feature) const;
    const std::vector<std::string>& classes() const { return classes_; }

    void save(const std::string& path) const;
    static LinearPosClassifier load(const std::string& path);

private:
    std::vector<std::string> classes_;
    std::vector<std::vector<double>> weights_;  // per class
    std::vector<double> bias_;
    unsigned seed_ = 0;
    friend struct Trainer;
};

std::vector<TrigramSample> load_training_file(const std::string& path);

struct TagCorrection {
    int token_index;
    std::string old_tag;
    std::string new_tag;
};

// Re-predicts the tag of every VB* terminal from its word trigram; boundary
// neighbors are the padding word (zero embedding). Tags are substituted in
// place; non-verb tokens are never touched.
std::vector<TagCorrection> correct_tags(parse::ParseTree& tree,
                                        const LinearPosClassifier& classifier,
                                        const EmbeddingTable& table);

}  // namespace juju::poscorrect
