#include "juju/scoring.hpp"

#include <algorithm>
#include <cmath>

namespace juju::scoring {

std::map<std::string, StemRecord> aggregate_stems(const spectree::OccurrenceProfile& profile) {
    std::map<std::string, StemRecord> records;
    for (const auto& [word, wp] : profile) {
        std::string stem = porter_stem(word);
        auto [it, inserted] = records.try_emplace(stem);
        StemRecord& rec = it->second;
        if (inserted) {
            rec.stem = stem;
            rec.first_seen = wp.first_seen;
        } else {
            rec.first_seen = std::min(rec.first_seen, wp.first_seen);
        }
        rec.word_counts[word] = wp.count;
        rec.profile.insert(wp.triples.begin(), wp.triples.end());
        for (const auto& [claim, agg] : wp.per_claim) {
            auto [cit, cinserted] = rec.per_claim.try_emplace(claim, agg);
            if (!cinserted) cit->second.first = std::max(cit->second.first, agg.first);
        }
    }
    // representative: highest count, then earliest first occurrence, then lexicographic
    for (auto& [stem, rec] : records) {
        std::size_t best_count = 0;
        std::size_t best_seen = 0;
        for (const auto& [word, count] : rec.word_counts) {
            std::size_t seen = profile.at(word).first_seen;
            bool better = rec.representative.empty() || count > best_count ||
                          (count == best_count &&
                           (seen < best_seen ||
                            (seen == best_seen && word < rec.representative)));
            if (better) {
                rec.representative = word;
                best_count = count;
                best_seen = seen;
            }
        }
    }
    return records;
}

double score_stem(const StemRecord& record, const ScoringParams& params) {
    double sum = 0.0;
    if (params.variant == Variant::JUJU05) {
        for (const auto& occ : record.profile)
            sum += std::exp(params.alpha * static_cast<double>(occ.nd) /
                                static_cast<double>(occ.nd + occ.nh) +
                            params.beta * static_cast<double>(occ.cd));
    } else {
        for (const auto& [claim, agg] : record.per_claim)
            sum += std::exp(params.alpha * static_cast<double>(agg.first) +
                            params.beta * static_cast<double>(agg.second));
    }
    return sum;
}

KeywordList extract_keywords(const std::map<std::string, StemRecord>& records,
                             const ScoringParams& params, std::size_t n) {
    struct Row {
        const StemRecord* rec;
        double raw;
    };
    std::vector<Row> rows;
    rows.reserve(records.size());
    double total = 0.0;
    for (const auto& [stem, rec] : records) {
        double s = score_stem(rec, params);
        rows.push_back({&rec, s});
        total += s;
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.raw != b.raw) return a.raw > b.raw;
        if (a.rec->first_seen != b.rec->first_seen)
            return a.rec->first_seen < b.rec->first_seen;
        return a.rec->representative < b.rec->representative;
    });
    KeywordList list;
    list.total_stems = rows.size();
    std::size_t keep = std::min(n, rows.size());
    list.keywords.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i)
        list.keywords.push_back(
            {rows[i].rec->representative, total > 0.0 ? rows[i].raw / total : 0.0});
    return list;
}

double keyword_text_ratio(const KeywordList& keywords, std::size_t unique_candidate_words) {
    if (unique_candidate_words == 0) return 0.0;
    return static_cast<double>(keywords.keywords.size()) /
           static_cast<double>(unique_candidate_words);
}

}  // namespace juju::scoring
