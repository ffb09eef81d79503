#include "juju/poscorrect.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace juju::poscorrect {

EmbeddingTable EmbeddingTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open embedding file: " + path);
    std::size_t count = 0, dim = 0;
    if (!(in >> count >> dim) || dim == 0)
        throw std::runtime_error("bad embedding file header: " + path);
    EmbeddingTable table(dim);
    std::string word;
    for (std::size_t i = 0; i < count; ++i) {
        if (!(in >> word))
            throw std::runtime_error("embedding file truncated: " + path);
        std::vector<double> vec(dim);
        for (auto& x : vec)
            if (!(in >> x)) throw std::runtime_error("embedding row truncated: " + word);
        table.insert(word, std::move(vec));
    }
    return table;
}

void EmbeddingTable::insert(const std::string& word, std::vector<double> vec) {
    if (vec.size() != dim_)
        throw std::runtime_error("embedding dimension mismatch for word: " + word);
    table_[word] = std::move(vec);
}

const std::vector<double>& EmbeddingTable::lookup(const std::string& word) const {
    auto it = table_.find(word);
    return it == table_.end() ? zero_ : it->second;
}

std::vector<double> featurize(const std::string& left, const std::string& center,
                              const std::string& right, const EmbeddingTable& table) {
    std::vector<double> f;
    f.reserve(3 * table.dimension());
    for (const auto* w : {&left, &center, &right}) {
        const auto& v = table.lookup(*w);
        f.insert(f.end(), v.begin(), v.end());
    }
    return f;
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

std::pair<LinearPosClassifier, LinearPosClassifier::TrainResult> LinearPosClassifier::train(
    const std::vector<TrigramSample>& samples, const EmbeddingTable& table,
    const TrainConfig& config) {
    if (samples.empty()) throw std::runtime_error("no training samples");
    LinearPosClassifier clf;
    clf.seed_ = config.seed;
    for (const auto& s : samples)
        if (std::find(clf.classes_.begin(), clf.classes_.end(), s.gold_tag) ==
            clf.classes_.end())
            clf.classes_.push_back(s.gold_tag);
    std::sort(clf.classes_.begin(), clf.classes_.end());

    const std::size_t dim = 3 * table.dimension();
    std::vector<std::vector<double>> features;
    std::vector<std::size_t> labels;
    features.reserve(samples.size());
    for (const auto& s : samples) {
        features.push_back(featurize(s.left, s.center, s.right, table));
        labels.push_back(static_cast<std::size_t>(
            std::find(clf.classes_.begin(), clf.classes_.end(), s.gold_tag) -
            clf.classes_.begin()));
    }

    // canonical order first, so the seeded shuffle (and therefore the model)
    // does not depend on the input ordering of the sample list
    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& sa = samples[a];
        const auto& sb = samples[b];
        return std::tie(sa.gold_tag, sa.left, sa.center, sa.right) <
               std::tie(sb.gold_tag, sb.left, sb.center, sb.right);
    });
    std::mt19937 rng(config.seed);
    std::shuffle(order.begin(), order.end(), rng);
    std::size_t n_train = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(config.split_ratio *
                                                 static_cast<double>(samples.size()))));
    n_train = std::min(n_train, samples.size());

    clf.weights_.assign(clf.classes_.size(), std::vector<double>(dim, 0.0));
    clf.bias_.assign(clf.classes_.size(), 0.0);

    TrainResult result;
    if (clf.classes_.size() < 2) {
        result.degenerate = true;
        result.train_accuracy = 1.0;
        result.test_accuracy = n_train < samples.size() ? 1.0 : 0.0;
        return {std::move(clf), result};
    }

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t idx = 0; idx < n_train; ++idx) {
            std::size_t i = order[idx];
            const auto& x = features[i];
            for (std::size_t c = 0; c < clf.classes_.size(); ++c) {
                double y = labels[i] == c ? 1.0 : -1.0;
                auto& w = clf.weights_[c];
                double margin = y * (dot(w, x) + clf.bias_[c]);
                double decay = 1.0 - config.learning_rate * config.l2;
                for (auto& wi : w) wi *= decay;
                if (margin < 1.0) {
                    for (std::size_t d = 0; d < dim; ++d)
                        w[d] += config.learning_rate * y * x[d];
                    clf.bias_[c] += config.learning_rate * y;
                }
            }
        }
    }

    std::size_t train_ok = 0, test_ok = 0;
    for (std::size_t idx = 0; idx < samples.size(); ++idx) {
        std::size_t i = order[idx];
        bool ok = clf.predict(features[i]) == clf.classes_[labels[i]];
        if (idx < n_train)
            train_ok += ok;
        else
            test_ok += ok;
    }
    result.train_accuracy = static_cast<double>(train_ok) / static_cast<double>(n_train);
    result.test_accuracy =
        n_train < samples.size()
            ? static_cast<double>(test_ok) / static_cast<double>(samples.size() - n_train)
            : 0.0;
    return {std::move(clf), result};
}

const std::string& LinearPosClassifier::predict(const std::vector<double>& feature) const {
    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < classes_.size(); ++c) {
        double s = dot(weights_[c], feature) + bias_[c];
        if (s > best_score) {
            best_score = s;
            best = c;
        }
    }
    return classes_[best];
}

void LinearPosClassifier::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model file: " + path);
    out << "juju-pos-model 1\n";
    out << classes_.size() << " " << (weights_.empty() ? 0 : weights_[0].size()) << " "
        << seed_ << "\n";
    out.precision(17);
    for (std::size_t c = 0; c < classes_.size(); ++c) {
        out << classes_[c] << " " << bias_[c];
        for (double w : weights_[c]) out << " " << w;
        out << "\n";
    }
}

LinearPosClassifier LinearPosClassifier::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (magic != "juju-pos-model" || version != 1)
        throw std::runtime_error("unrecognized model file: " + path);
    std::size_t n_classes = 0, dim = 0;
    LinearPosClassifier clf;
    in >> n_classes >> dim >> clf.seed_;
    clf.classes_.resize(n_classes);
    clf.weights_.assign(n_classes, std::vector<double>(dim));
    clf.bias_.resize(n_classes);
    for (std::size_t c = 0; c < n_classes; ++c) {
        in >> clf.classes_[c] >> clf.bias_[c];
        for (auto& w : clf.weights_[c]) in >> w;
    }
    if (!in) throw std::runtime_error("truncated model file: " + path);
    return clf;
}

std::vector<TrigramSample> load_training_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open training file: " + path);
    std::vector<TrigramSample> samples;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": missing tag field");
        std::istringstream words(line.substr(0, tab));
        TrigramSample s;
        if (!(words >> s.left >> s.center >> s.right))
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected three words");
        s.gold_tag = line.substr(tab + 1);
        samples.push_back(std::move(s));
    }
    return samples;
}

namespace {

void collect_terminal_ptrs(parse::ParseTree& tree, std::vector<parse::ParseTree*>& out) {
    if (tree.terminal()) {
        out.push_back(&tree);
        return;
    }
    for (auto& c : tree.children) collect_terminal_ptrs(c, out);
}

}  // namespace

std::vector<TagCorrection> correct_tags(parse::ParseTree& tree,
                                        const LinearPosClassifier& classifier,
                                        const EmbeddingTable& table) {
    std::vector<parse::ParseTree*> leaves;
    collect_terminal_ptrs(tree, leaves);
    const std::string pad;  // zero embedding by the OOV convention
    std::vector<TagCorrection> corrections;
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        if (leaves[i]->label.rfind("VB", 0) != 0) continue;
        const std::string& left = i > 0 ? leaves[i - 1]->word : pad;
        const std::string& right = i + 1 < leaves.size() ? leaves[i + 1]->word : pad;
        auto feature = featurize(left, leaves[i]->word, right, table);
        const std::string& predicted = classifier.predict(feature);
        if (predicted != leaves[i]->label) {
            corrections.push_back({static_cast<int>(i), leaves[i]->label, predicted});
            leaves[i]->label = predicted;
        }
    }
    return corrections;
}

}  // namespace juju::poscorrect
