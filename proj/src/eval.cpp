#include "juju/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace juju::eval {

namespace {

std::vector<std::size_t> found_ranks(const search::RunResult& result,
                                     const std::set<std::string>& relevant) {
    std::vector<std::size_t> ranks;
    for (std::size_t i = 0; i < result.hits.size(); ++i)
        if (relevant.count(result.hits[i].doc_id)) ranks.push_back(i + 1);
    return ranks;
}

}  // namespace

double recall_at_k(const search::RunResult& result, const std::set<std::string>& relevant,
                   std::size_t k) {
    if (relevant.empty()) return 0.0;
    std::size_t found = 0;
    for (std::size_t i = 0; i < result.hits.size() && i < k; ++i)
        if (relevant.count(result.hits[i].doc_id)) ++found;
    return static_cast<double>(found) / static_cast<double>(relevant.size());
}

double pres_corrected_rank_sum(const std::vector<std::size_t>& ranks, std::size_t n,
                               std::size_t n_max) {
    double sum = 0.0;
    std::size_t n_found = 0;
    for (std::size_t r : ranks)
        if (r <= n_max) {
            sum += static_cast<double>(r);
            ++n_found;
        }
    // every remaining relevant document takes the next worst-case rank:
    // Nmax+n, Nmax+n-1, ...
    for (std::size_t i = 0; i < n - n_found; ++i)
        sum += static_cast<double>(n_max + n - i);
    return sum;
}

double pres_legacy_rank_sum(const std::vector<std::size_t>& ranks, std::size_t n,
                            std::size_t n_max) {
    double sum = 0.0;
    std::size_t n_found = 0;
    for (std::size_t r : ranks)
        if (r <= n_max) {
            sum += static_cast<double>(r);
            ++n_found;
        }
    double nr = static_cast<double>(n_found);
    return sum + nr * static_cast<double>(n_max + n) - nr * (nr - 1.0) / 2.0;
}

double pres_from_rank_sum(double rank_sum, std::size_t n, std::size_t n_max) {
    double nn = static_cast<double>(n);
    return 1.0 - (rank_sum / nn - (nn + 1.0) / 2.0) / static_cast<double>(n_max);
}

double pres_at_k(const search::RunResult& result, const std::set<std::string>& relevant,
                 std::size_t n_max) {
    if (relevant.empty()) return 0.0;
    auto ranks = found_ranks(result, relevant);
    double sum = pres_corrected_rank_sum(ranks, relevant.size(), n_max);
    return pres_from_rank_sum(sum, relevant.size(), n_max);
}

double pres_legacy(const std::vector<std::size_t>& ranks, std::size_t n, std::size_t n_max) {
    return pres_from_rank_sum(pres_legacy_rank_sum(ranks, n, n_max), n, n_max);
}

std::optional<std::size_t> first_hit_rank(const search::RunResult& result,
                                          const std::set<std::string>& relevant) {
    for (std::size_t i = 0; i < result.hits.size(); ++i)
        if (relevant.count(result.hits[i].doc_id)) return i + 1;
    return std::nullopt;
}

namespace {

// Percentile over discrete ranks: the smallest value with strictly more than
// p of the mass at or below it (index floor(p*n)+1, clamped).
std::size_t rank_percentile(const std::vector<std::size_t>& sorted, double p) {
    std::size_t idx = static_cast<std::size_t>(
        std::floor(p * static_cast<double>(sorted.size())));
    if (idx >= sorted.size()) idx = sorted.size() - 1;
    return sorted[idx];
}

}  // namespace

FirstHitStats first_hit_stats(const std::vector<search::RunResult>& results,
                              const std::map<std::string, std::set<std::string>>& relevant,
                              std::size_t bin_width, std::size_t cap) {
    FirstHitStats stats;
    std::vector<std::size_t> hits;
    for (const auto& r : results) {
        auto it = relevant.find(r.topic_id);
        if (it == relevant.end() || it->second.empty()) continue;
        if (auto rank = first_hit_rank(r, it->second)) hits.push_back(std::min(*rank, cap));
    }
    stats.eligible_topics = hits.size();
    if (hits.empty()) return stats;
    std::sort(hits.begin(), hits.end());
    for (std::size_t r : hits) {
        std::size_t bin = ((r - 1) / bin_width) * bin_width + 1;
        ++stats.histogram[bin];
    }
    double cum = 0.0;
    for (const auto& [bin, count] : stats.histogram) {
        cum += static_cast<double>(count);
        stats.cumulative_pct.push_back(100.0 * cum / static_cast<double>(hits.size()));
    }
    stats.median = rank_percentile(hits, 0.5);
    stats.pct80 = rank_percentile(hits, 0.8);
    return stats;
}

namespace {

// Regularized incomplete beta via continued fraction (Lentz).
double beta_cf(double a, double b, double x) {
    const int max_iter = 300;
    const double eps = 3e-14, fpmin = 1e-300;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0, d = 1.0 - qab * x / qap;
    if (std::fabs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                      a * std::log(x) + b * std::log(1.0 - x);
    double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

}  // namespace

double student_t_two_sided_p(double t, std::size_t dof) {
    double v = static_cast<double>(dof);
    double x = v / (v + t * t);
    return incomplete_beta(v / 2.0, 0.5, x);
}

TTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2)
        throw std::invalid_argument("paired_t_test needs equal-length vectors, n >= 2");
    std::size_t n = a.size();
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
    double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(n);
    double var = 0.0;
    for (double x : d) var += (x - mean) * (x - mean);
    var /= static_cast<double>(n - 1);
    TTestResult result;
    if (var == 0.0) {
        result.degenerate = true;
        result.t = 0.0;
        result.p = mean == 0.0 ? 1.0 : 0.0;
        return result;
    }
    result.t = mean / std::sqrt(var / static_cast<double>(n));
    result.p = student_t_two_sided_p(result.t, n - 1);
    return result;
}

namespace {

// splitmix64: each permutation draws its sign pattern from its own stream, so
// the result is independent of how permutations are distributed over threads
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace

double randomization_test(const std::vector<double>& a, const std::vector<double>& b,
                          std::size_t permutations, std::uint64_t seed, int threads) {
    if (a.size() != b.size() || a.size() < 2)
        throw std::invalid_argument("randomization_test needs equal-length vectors, n >= 2");
    std::size_t n = a.size();
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
    double observed = std::fabs(std::accumulate(d.begin(), d.end(), 0.0)) /
                      static_cast<double>(n);

    std::size_t count = 0;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(std::max(threads, 1)) \
    reduction(+ : count)
#endif
    for (std::size_t k = 0; k < permutations; ++k) {
        std::uint64_t state = splitmix64(seed ^ (0x5851f42d4c957f2dull * (k + 1)));
        double sum = 0.0;
        std::uint64_t bits = 0;
        int avail = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (avail == 0) {
                state = splitmix64(state);
                bits = state;
                avail = 64;
            }
            sum += (bits & 1) ? d[i] : -d[i];
            bits >>= 1;
            --avail;
        }
        if (std::fabs(sum) / static_cast<double>(n) >= observed) ++count;
    }
    return static_cast<double>(count + 1) / static_cast<double>(permutations + 1);
}

double randomization_test_exact(const std::vector<double>& a, const std::vector<double>& b) {
    std::size_t n = a.size();
    if (n != b.size() || n < 1 || n > 20)
        throw std::invalid_argument("exact enumeration supports 1 <= n <= 20");
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
    double observed = std::fabs(std::accumulate(d.begin(), d.end(), 0.0)) /
                      static_cast<double>(n);
    std::size_t total = std::size_t(1) << n;
    std::size_t count = 0;
    for (std::size_t mask = 0; mask < total; ++mask) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            sum += (mask >> i) & 1 ? d[i] : -d[i];
        if (std::fabs(sum) / static_cast<double>(n) >= observed) ++count;
    }
    return static_cast<double>(count) / static_cast<double>(total);
}

RunEvaluation evaluate_run(const std::vector<search::RunResult>& results,
                           const corpus::QrelSet& qrels, const std::vector<std::size_t>& ks,
                           const std::string& run_name) {
    RunEvaluation eval;
    eval.run_name = run_name;
    for (const auto& r : results) {
        auto it = qrels.relevant.find(r.topic_id);
        if (it == qrels.relevant.end() || it->second.empty()) continue;  // unjudged topic
        for (std::size_t k : ks) {
            eval.metrics["recall"][k].values[r.topic_id] = recall_at_k(r, it->second, k);
            eval.metrics["pres"][k].values[r.topic_id] = pres_at_k(r, it->second, k);
        }
    }
    return eval;
}

std::vector<LeaderboardRow> leaderboard(const std::vector<RunEvaluation>& evals,
                                        const std::string& reference_run,
                                        double significance_level, std::uint64_t seed,
                                        std::size_t permutations) {
    const RunEvaluation* reference = nullptr;
    for (const auto& e : evals)
        if (e.run_name == reference_run) reference = &e;
    if (!reference) throw std::invalid_argument("reference run not found: " + reference_run);

    std::vector<LeaderboardRow> rows;
    for (const auto& e : evals) {
        for (const auto& [metric, per_k] : e.metrics) {
            for (const auto& [k, scores] : per_k) {
                const auto& ref_scores = reference->metrics.at(metric).at(k);
                // shared topic set, same order on both sides
                std::vector<double> mine, ref;
                std::vector<std::string> missing;
                for (const auto& [topic, value] : scores.values) {
                    auto it = ref_scores.values.find(topic);
                    if (it == ref_scores.values.end()) {
                        missing.push_back(topic);
                        continue;
                    }
                    mine.push_back(value);
                    ref.push_back(it->second);
                }
                if (scores.values.size() != ref_scores.values.size() || !missing.empty()) {
                    std::string msg = "topic sets differ between " + e.run_name + " and " +
                                      reference_run + ":";
                    for (const auto& t : missing) msg += " " + t;
                    throw std::invalid_argument(msg);
                }
                LeaderboardRow row;
                row.run = e.run_name;
                row.metric = metric;
                row.k = k;
                row.mean = mine.empty()
                               ? 0.0
                               : std::accumulate(mine.begin(), mine.end(), 0.0) /
                                     static_cast<double>(mine.size());
                if (&e == reference || mine.size() < 2) {
                    row.t_p = 1.0;
                    row.rand_p = 1.0;
                    row.flag = SignificanceFlag::NOT_SIGNIFICANT;
                } else {
                    row.t_p = paired_t_test(mine, ref).p;
                    row.rand_p = randomization_test(mine, ref, permutations, seed);
                    double ref_mean = std::accumulate(ref.begin(), ref.end(), 0.0) /
                                      static_cast<double>(ref.size());
                    bool significant =
                        row.t_p < significance_level && row.rand_p < significance_level;
                    row.flag = !significant ? SignificanceFlag::NOT_SIGNIFICANT
                               : row.mean > ref_mean ? SignificanceFlag::BETTER
                                                     : SignificanceFlag::WORSE;
                }
                rows.push_back(row);
            }
        }
    }
    return rows;
}

namespace {

const char* flag_name(SignificanceFlag flag) {
    switch (flag) {
        case SignificanceFlag::BETTER: return "BETTER";
        case SignificanceFlag::WORSE: return "WORSE";
        default: return "NOT_SIGNIFICANT";
    }
}

}  // namespace

void write_leaderboard_csv(const std::vector<LeaderboardRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write leaderboard: " + path);
    out << "run,metric,K,mean,t_p,rand_p,flag\n";
    for (const auto& r : rows)
        out << r.run << "," << r.metric << "," << r.k << "," << std::fixed
            << std::setprecision(6) << r.mean << "," << r.t_p << "," << r.rand_p << ","
            << flag_name(r.flag) << "\n";
}

namespace {

char domain_of(const corpus::PatentDocument* doc) {
    if (!doc || doc->cpc_codes.empty() || doc->cpc_codes.front().empty()) return '?';
    return doc->cpc_codes.front()[0];
}

const corpus::PatentDocument* find_doc(const std::vector<corpus::PatentDocument>& docs,
                                       const std::string& id) {
    for (const auto& d : docs)
        if (d.doc_id == id) return &d;
    return nullptr;
}

}  // namespace

std::vector<HeatmapCell> domain_heatmap(const std::vector<RunEvaluation>& evals,
                                        const std::vector<corpus::PatentDocument>& docs) {
    std::vector<HeatmapCell> cells;
    for (const auto& e : evals) {
        auto it = e.metrics.find("pres");
        if (it == e.metrics.end()) continue;
        auto kit = it->second.find(100);
        if (kit == it->second.end()) continue;
        struct Entry {
            char domain;
            std::string topic;
            double value;
        };
        std::vector<Entry> entries;
        for (const auto& [topic, value] : kit->second.values)
            entries.push_back({domain_of(find_doc(docs, topic)), topic, value});
        std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
            if (a.domain != b.domain) return a.domain < b.domain;
            return a.topic < b.topic;
        });
        for (const auto& en : entries) {
            std::ostringstream os;
            os << std::fixed << std::setprecision(6) << en.value;
            cells.push_back({e.run_name, en.domain, en.topic, os.str()});
        }
    }
    return cells;
}

std::vector<HeatmapCell> first_hit_heatmap(
    const std::vector<std::vector<search::RunResult>>& runs,
    const std::vector<std::string>& run_names, const corpus::QrelSet& qrels,
    const std::vector<corpus::PatentDocument>& docs) {
    std::vector<HeatmapCell> cells;
    for (std::size_t r = 0; r < runs.size(); ++r) {
        struct Entry {
            char domain;
            std::string topic;
            std::string label;
        };
        std::vector<Entry> entries;
        for (const auto& result : runs[r]) {
            auto it = qrels.relevant.find(result.topic_id);
            if (it == qrels.relevant.end() || it->second.empty()) continue;
            auto rank = first_hit_rank(result, it->second);
            if (!rank) continue;
            const char* label = *rank <= 20 ? "FIRST 20" : *rank <= 100 ? "FIRST 100"
                                                                        : "AFTER 100";
            entries.push_back({domain_of(find_doc(docs, result.topic_id)), result.topic_id,
                               label});
        }
        std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
            if (a.domain != b.domain) return a.domain < b.domain;
            return a.topic < b.topic;
        });
        for (const auto& en : entries)
            cells.push_back({run_names[r], en.domain, en.topic, en.label});
    }
    return cells;
}

void write_heatmap_csv(const std::vector<HeatmapCell>& cells, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write heatmap: " + path);
    out << "run,domain,topic,value\n";
    for (const auto& c : cells)
        out << c.run << "," << c.domain << "," << c.topic << "," << c.value << "\n";
}

}  // namespace juju::eval
