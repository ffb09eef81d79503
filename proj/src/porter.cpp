// Classic Porter (1980) stemming algorithm. Longest-match suffix per step;
// measure m over the [C](VC)^m[V] decomposition; 'y' counts as a vowel when
// preceded by a consonant. Words of length <= 2 are returned unchanged.

#include <algorithm>
#include <array>
#include <string>
#include <string_view>

#include "juju/scoring.hpp"

namespace juju::scoring {

namespace {

bool is_consonant(std::string_view w, std::size_t i) {
    char c = w[i];
    switch (c) {
        case 'a': case 'e': case 'i': case 'o': case 'u':
            return false;
        case 'y':
            return i == 0 ? true : !is_consonant(w, i - 1);
        default:
            return true;
    }
}

int measure(std::string_view stem) {
    int m = 0;
    bool prev_vowel = false;
    for (std::size_t i = 0; i < stem.size(); ++i) {
        bool v = !is_consonant(stem, i);
        if (prev_vowel && !v) ++m;
        prev_vowel = v;
    }
    return m;
}

bool has_vowel(std::string_view stem) {
    for (std::size_t i = 0; i < stem.size(); ++i)
        if (!is_consonant(stem, i)) return true;
    return false;
}

bool double_consonant(std::string_view w) {
    std::size_t n = w.size();
    return n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1);
}

// *o: ends cvc where the final c is not w, x or y
bool cvc_end(std::string_view w) {
    std::size_t n = w.size();
    if (n < 3) return false;
    if (!is_consonant(w, n - 3) || is_consonant(w, n - 2) || !is_consonant(w, n - 1))
        return false;
    char c = w[n - 1];
    return c != 'w' && c != 'x' && c != 'y';
}

bool ends_with(std::string_view w, std::string_view suffix) {
    return w.size() >= suffix.size() &&
           w.compare(w.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct Rule {
    std::string_view suffix;
    std::string_view replacement;
};

// Longest matching suffix wins; its condition gates the rewrite and shorter
// suffixes are not retried.
void apply_rules(std::string& w, const std::vector<Rule>& rules, int min_measure) {
    const Rule* best = nullptr;
    for (const auto& r : rules)
        if (ends_with(w, r.suffix) && (!best || r.suffix.size() > best->suffix.size()))
            best = &r;
    if (!best) return;
    std::string_view stem(w.data(), w.size() - best->suffix.size());
    if (measure(stem) > min_measure) {
        w.resize(stem.size());
        w += best->replacement;
    }
}

void step1a(std::string& w) {
    if (ends_with(w, "sses"))
        w.resize(w.size() - 2);
    else if (ends_with(w, "ies"))
        w.resize(w.size() - 2);
    else if (ends_with(w, "ss"))
        ;  // unchanged
    else if (ends_with(w, "s"))
        w.resize(w.size() - 1);
}

void step1b(std::string& w) {
    if (ends_with(w, "eed")) {
        if (measure(std::string_view(w.data(), w.size() - 3)) > 0) w.resize(w.size() - 1);
        return;
    }
    bool fired = false;
    if (ends_with(w, "ed") && has_vowel(std::string_view(w.data(), w.size() - 2))) {
        w.resize(w.size() - 2);
        fired = true;
    } else if (ends_with(w, "ing") && has_vowel(std::string_view(w.data(), w.size() - 3))) {
        w.resize(w.size() - 3);
        fired = true;
    }
    if (!fired) return;
    if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
        w += 'e';
    } else if (double_consonant(w)) {
        char c = w.back();
        if (c != 'l' && c != 's' && c != 'z') w.resize(w.size() - 1);
    } else if (measure(w) == 1 && cvc_end(w)) {
        w += 'e';
    }
}

void step1c(std::string& w) {
    if (ends_with(w, "y") && has_vowel(std::string_view(w.data(), w.size() - 1)))
        w.back() = 'i';
}

const std::vector<Rule> kStep2 = {
    {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"}, {"anci", "ance"},
    {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},   {"entli", "ent"},
    {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
    {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
    {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},   {"biliti", "ble"},
};

const std::vector<Rule> kStep3 = {
    {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
    {"ical", "ic"},  {"ful", ""},   {"ness", ""},
};

const std::array<std::string_view, 19> kStep4 = {
    "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement", "ment",
    "ent", "ion", "ou", "ism", "ate", "iti", "ous", "ive", "ize",
};

void step4(std::string& w) {
    std::string_view best;
    for (auto s : kStep4)
        if (ends_with(w, s) && s.size() > best.size()) best = s;
    if (best.empty()) return;
    std::string_view stem(w.data(), w.size() - best.size());
    if (measure(stem) <= 1) return;
    if (best == "ion" && !(ends_with(stem, "s") || ends_with(stem, "t"))) return;
    w.resize(stem.size());
}

void step5(std::string& w) {
    if (ends_with(w, "e")) {
        std::string_view stem(w.data(), w.size() - 1);
        int m = measure(stem);
        if (m > 1 || (m == 1 && !cvc_end(stem))) w.resize(w.size() - 1);
    }
    if (double_consonant(w) && w.back() == 'l' &&
        measure(std::string_view(w.data(), w.size() - 1)) > 1)
        w.resize(w.size() - 1);
}

}  // namespace

std::string porter_stem(const std::string& word) {
    std::string w = word;
    std::transform(w.begin(), w.end(), w.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (w.size() <= 2) return w;
    step1a(w);
    step1b(w);
    step1c(w);
    apply_rules(w, kStep2, 0);
    apply_rules(w, kStep3, 0);
    step4(w);
    step5(w);
    return w;
}

}  // namespace juju::scoring
