#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "juju/corpus.hpp"
#include "juju/search.hpp"

namespace juju::eval {

double recall_at_k(const search::RunResult& result,
                   const std::set<std::string>& relevant, std::size_t k);

// Corrected PRES: relevant documents not retrieved within Nmax are assigned
// ranks Nmax+n, Nmax+n-1, ... ; PRES = 1 - (sum(ri)/n - (n+1)/2) / Nmax.
double pres_at_k(const search::RunResult& result,
                 const std::set<std::string>& relevant, std::size_t n_max);

// Rank sums for both formulas, exposed for the worked-example tests.
double pres_corrected_rank_sum(const std::vector<std::size_t>& found_ranks,
                               std::size_t n, std::size_t n_max);
double pres_legacy_rank_sum(const std::vector<std::size_t>& found_ranks,
                            std::size_t n, std::size_t n_max);
double pres_from_rank_sum(double rank_sum, std::size_t n, std::size_t n_max);

// The uncorrected published formula, kept only to document its failure mode.
double pres_legacy(const std::vector<std::size_t>& found_ranks, std::size_t n,
                   std::size_t n_max);

struct FirstHitStats {
    std::map<std::size_t, std::size_t> histogram;  // bin start (1, 11, 21, ...) -> count
    std::vector<double> cumulative_pct;            // per bin, in bin order
    std::size_t median = 0;
    std::size_t pct80 = 0;
    std::size_t eligible_topics = 0;
};

std::optional<std::size_t> first_hit_rank(const search::RunResult& result,
                                          const std::set<std::string>& relevant);

// Restricted to topics where the run retrieved at least one relevant doc.
FirstHitStats first_hit_stats(const std::vector<search::RunResult>& results,
                              const std::map<std::string, std::set<std::string>>& relevant,
                              std::size_t bin_width = 10, std::size_t cap = 1000);

struct TTestResult {
    double t = 0.0;
    double p = 1.0;
    bool degenerate = false;  // zero variance of differences
};

TTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b);

// Two-sided sign-flip permutation test on paired differences, +1 smoothing,
// deterministic for a fixed seed and any thread count.
double randomization_test(const std::vector<double>& a, const std::vector<double>& b,
                          std::size_t permutations = 100000, std::uint64_t seed = 1,
                          int threads = 1);

// Exact enumeration of all 2^n sign patterns; test oracle for small n.
double randomization_test_exact(const std::vector<double>& a, const std::vector<double>& b);

enum class SignificanceFlag { BETTER, WORSE, NOT_SIGNIFICANT };

struct TopicScores {
    // topic -> metric value, shared topic set across runs
    std::map<std::string, double> values;
};

struct RunEvaluation {
    std::string run_name;
    // metric name ("recall"/"pres") -> K -> per-topic values
    std::map<std::string, std::map<std::size_t, TopicScores>> metrics;
};

RunEvaluation evaluate_run(const std::vector<search::RunResult>& results,
                           const corpus::QrelSet& qrels,
                           const std::vector<std::size_t>& ks,
                           const std::string& run_name);

struct LeaderboardRow {
    std::string run;
    std::string metric;
    std::size_t k;
    double mean;
    double t_p;
    double rand_p;
    SignificanceFlag flag;
};

std::vector<LeaderboardRow> leaderboard(const std::vector<RunEvaluation>& evals,
                                        const std::string& reference_run,
                                        double significance_level = 0.05,
                                        std::uint64_t seed = 1,
                                        std::size_t permutations = 100000);

void write_leaderboard_csv(const std::vector<LeaderboardRow>& rows, const std::string& path);

struct HeatmapCell {
    std::string run;
    char domain;  // CPC first letter, '?' when absent
    std::string topic;
    std::string value;
};

// PRES@100 per topic, grouped by CPC domain letter of each topic document.
std::vector<HeatmapCell> domain_heatmap(const std::vector<RunEvaluation>& evals,
                                        const std::vector<corpus::PatentDocument>& docs);

// First-hit range labels per topic: FIRST 20 / FIRST 100 / AFTER 100.
std::vector<HeatmapCell> first_hit_heatmap(
    const std::vector<std::vector<search::RunResult>>& runs,
    const std::vector<std::string>& run_names, const corpus::QrelSet& qrels,
    const std::vector<corpus::PatentDocument>& docs);

void write_heatmap_csv(const std::vector<HeatmapCell>& cells, const std::string& path);

// Student-t two-sided survival helper (regularized incomplete beta based).
double student_t_two_sided_p(double t, std::size_t dof);

}  // namespace juju::eval
