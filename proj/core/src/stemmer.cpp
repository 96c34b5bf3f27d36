#include "vdesc/stemmer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace vdesc {

namespace {

bool is_vowel_letter(char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

bool is_cons(const std::string& w, std::size_t i) {
    char c = w[i];
    if (is_vowel_letter(c)) return false;
    if (c == 'y') return i == 0 ? true : !is_cons(w, i - 1);
    return true;
}

// m in the [C](VC){m}[V] decomposition.
int measure(const std::string& w) {
    int m = 0;
    bool prev_vowel = false;
    for (std::size_t i = 0; i < w.size(); ++i) {
        bool cons = is_cons(w, i);
        if (prev_vowel && cons) ++m;
        prev_vowel = !cons;
    }
    return m;
}

bool has_vowel(const std::string& w) {
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!is_cons(w, i)) return true;
    }
    return false;
}

bool ends_double_cons(const std::string& w) {
    return w.size() >= 2 && w[w.size() - 1] == w[w.size() - 2] &&
           is_cons(w, w.size() - 1);
}

bool ends_cvc(const std::string& w) {
    if (w.size() < 3) return false;
    if (!(is_cons(w, w.size() - 3) && !is_cons(w, w.size() - 2) &&
          is_cons(w, w.size() - 1))) {
        return false;
    }
    char last = w.back();
    return last != 'w' && last != 'x' && last != 'y';
}

bool ends_with(const std::string& w, const char* suf) {
    std::size_t n = std::char_traits<char>::length(suf);
    return w.size() >= n && w.compare(w.size() - n, n, suf) == 0;
}

std::string chop(const std::string& w, std::size_t n) {
    return w.substr(0, w.size() - n);
}

struct Rule {
    const char* suffix;
    const char* replacement;
};

// Longest matching suffix is selected; the m-condition then gates the
// replacement without falling through to shorter suffixes.
bool apply_table(std::string& w, const Rule* rules, std::size_t count, int min_m) {
    const Rule* best = nullptr;
    std::size_t best_len = 0;
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t len = std::char_traits<char>::length(rules[i].suffix);
        if (len > best_len && ends_with(w, rules[i].suffix)) {
            best = &rules[i];
            best_len = len;
        }
    }
    if (!best) return false;
    std::string stem = chop(w, best_len);
    if (measure(stem) > min_m) {
        w = stem + best->replacement;
        return true;
    }
    return false;
}

}  // namespace

std::string porter_stem(const std::string& word) {
    std::string w;
    w.reserve(word.size());
    for (char c : word) {
        unsigned char uc = static_cast<unsigned char>(c);
        if (uc >= 0x80 || !std::isalpha(uc)) return word;
        w.push_back(static_cast<char>(std::tolower(uc)));
    }
    if (w.size() <= 1) return w;

    // step 1a
    if (ends_with(w, "sses")) w = chop(w, 2);
    else if (ends_with(w, "ies")) w = chop(w, 2);
    else if (ends_with(w, "ss")) {}
    else if (ends_with(w, "s")) w = chop(w, 1);

    // step 1b
    bool cleanup_1b = false;
    if (ends_with(w, "eed")) {
        if (measure(chop(w, 3)) > 0) w = chop(w, 1);
    } else if (ends_with(w, "ed")) {
        if (has_vowel(chop(w, 2))) {
            w = chop(w, 2);
            cleanup_1b = true;
        }
    } else if (ends_with(w, "ing")) {
        if (has_vowel(chop(w, 3))) {
            w = chop(w, 3);
            cleanup_1b = true;
        }
    }
    if (cleanup_1b) {
        if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
            w.push_back('e');
        } else if (ends_double_cons(w) && !ends_with(w, "l") && !ends_with(w, "s") &&
                   !ends_with(w, "z")) {
            w = chop(w, 1);
        } else if (measure(w) == 1 && ends_cvc(w)) {
            w.push_back('e');
        }
    }

    // step 1c
    if (ends_with(w, "y") && has_vowel(chop(w, 1))) {
        w.back() = 'i';
    }

    static const Rule kStep2[] = {
        {"ational", "ate"}, {"ization", "ize"}, {"iveness", "ive"},
        {"fulness", "ful"}, {"ousness", "ous"}, {"biliti", "ble"},
        {"tional", "tion"}, {"alism", "al"},    {"aliti", "al"},
        {"ation", "ate"},   {"entli", "ent"},   {"ousli", "ous"},
        {"iviti", "ive"},   {"enci", "ence"},   {"anci", "ance"},
        {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},
        {"ator", "ate"},    {"eli", "e"},
    };
    apply_table(w, kStep2, std::size(kStep2), 0);

    static const Rule kStep3[] = {
        {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
        {"ical", "ic"},  {"ful", ""},   {"ness", ""},
    };
    apply_table(w, kStep3, std::size(kStep3), 0);

    // step 4: plain deletions at m > 1; "ion" additionally needs s/t before it
    static const char* kStep4[] = {
        "ement", "ance", "ence", "able", "ible", "ment", "ant", "ent", "ion",
        "ism",  "ate",  "iti",  "ous",  "ive",  "ize",  "al",  "er",  "ic", "ou",
    };
    {
        const char* best = nullptr;
        std::size_t best_len = 0;
        for (const char* suf : kStep4) {
            std::size_t len = std::char_traits<char>::length(suf);
            if (len > best_len && ends_with(w, suf)) {
                best = suf;
                best_len = len;
            }
        }
        if (best) {
            std::string stem = chop(w, best_len);
            bool ok = measure(stem) > 1;
            if (ok && std::string(best) == "ion") {
                ok = !stem.empty() && (stem.back() == 's' || stem.back() == 't');
            }
            if (ok) w = stem;
        }
    }

    // step 5a
    if (ends_with(w, "e")) {
        std::string stem = chop(w, 1);
        int m = measure(stem);
        if (m > 1 || (m == 1 && !ends_cvc(stem))) w = stem;
    }

    // step 5b
    if (measure(w) > 1 && ends_double_cons(w) && ends_with(w, "l")) {
        w = chop(w, 1);
    }
    return w;
}

}  // namespace vdesc
