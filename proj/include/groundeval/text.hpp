#pragma once

// Shared text utilities: normalization, tokenization, light stemming,
// sentence segmentation, token counting, and content hashing. Everything
// here is pure and deterministic.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "groundeval/errors.hpp"

namespace groundeval::text {

inline std::string trim(std::string_view s) {
    const char* ws = " \t\r\n\f\v";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return std::string(s.substr(b, e - b + 1));
}

inline std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

// Collapse internal whitespace runs to single spaces and trim the ends.
inline std::string collapse_whitespace(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool in_ws = true;  // leading whitespace dropped
    for (unsigned char c : s) {
        if (std::isspace(c)) {
            in_ws = true;
        } else {
            if (in_ws && !out.empty()) out.push_back(' ');
            out.push_back(static_cast<char>(c));
            in_ws = false;
        }
    }
    return out;
}

// Lowercased alphanumeric token runs; punctuation is a separator.
inline std::vector<std::string> tokenize(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    for (unsigned char c : s) {
        if (std::isalnum(c)) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

// Light suffix stripper so inflected forms compare equal (claim/claiming,
// estimate/estimated, loss/losses). Not a linguistic stemmer; just enough
// for bag-of-words containment.
inline std::string stem(std::string_view w) {
    std::string s(w);
    auto ends_with = [&](std::string_view suf) {
        return s.size() >= suf.size() &&
               std::string_view(s).substr(s.size() - suf.size()) == suf;
    };
    if (s.size() > 5 && ends_with("ing")) {
        s.erase(s.size() - 3);
    } else if (s.size() > 4 && ends_with("ied")) {
        s.erase(s.size() - 3);
        s.push_back('y');
    } else if (s.size() > 4 && ends_with("ies")) {
        s.erase(s.size() - 3);
        s.push_back('y');
    } else if (s.size() > 4 && ends_with("ed")) {
        s.erase(s.size() - 2);
    } else if (s.size() > 4 && ends_with("es")) {
        s.erase(s.size() - 2);
    } else if (s.size() > 3 && ends_with("s") && !ends_with("ss")) {
        s.erase(s.size() - 1);
    }
    if (s.size() > 3 && s.back() == 'e') s.pop_back();
    return s;
}

// Fixed English function-word list. The same list ships as a data asset
// (data/stopwords_en.txt); load_stopwords() can override it.
inline const std::unordered_set<std::string>& default_stopwords() {
    static const std::unordered_set<std::string> words = {
        "a", "an", "the", "is", "are", "was", "were", "be", "been", "being",
        "am", "do", "does", "did", "done", "have", "has", "had", "having",
        "will", "would", "can", "could", "shall", "should", "may", "might",
        "must", "of", "in", "on", "at", "to", "for", "with", "by", "from",
        "as", "that", "this", "these", "those", "it", "its", "and", "or",
        "but", "not", "no", "nor", "than", "then", "so", "such", "there",
        "their", "they", "them", "he", "she", "his", "her", "him", "we",
        "you", "i", "me", "my", "our", "your", "what", "which", "who",
        "whom", "when", "where", "how", "why", "if", "while", "because",
        "until", "against", "between", "through", "about", "into", "over",
        "under", "again", "further", "once", "during", "before", "after",
        "above", "below", "up", "down", "out", "off", "both", "few", "more",
        "most", "only", "very", "just", "any", "all", "each", "other",
        "some", "own", "same", "too", "also",
    };
    return words;
}

inline std::unordered_set<std::string> load_stopwords(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open stopword file: " + path);
    std::unordered_set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        auto w = trim(line);
        if (!w.empty() && w[0] != '#') words.insert(to_lower(w));
    }
    return words;
}

// Tokens minus stopwords, in order of first appearance, deduplicated.
inline std::vector<std::string> content_words(
    std::string_view s,
    const std::unordered_set<std::string>& stopwords = default_stopwords()) {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (auto& tok : tokenize(s)) {
        if (stopwords.count(tok)) continue;
        if (seen.insert(tok).second) out.push_back(tok);
    }
    return out;
}

namespace detail {

inline const std::unordered_set<std::string>& abbreviations() {
    static const std::unordered_set<std::string> abbr = {
        "mr", "mrs", "ms", "dr", "prof", "st", "jr", "sr", "vs", "etc",
        "e.g", "i.e", "u.s", "u.k", "a.m", "p.m", "no", "fig", "inc",
        "ltd", "co", "dept", "est", "approx",
    };
    return abbr;
}

// Token immediately preceding position `dot` (exclusive), lowercased.
inline std::string token_before(std::string_view s, size_t dot) {
    size_t e = dot;
    size_t b = e;
    while (b > 0 && !std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    std::string tok(s.substr(b, e - b));
    while (!tok.empty() && tok.back() == '.') tok.pop_back();
    return to_lower(tok);
}

}  // namespace detail

// Segment on {. ! ?} with abbreviation guards. A terminator ends a sentence
// when followed by end-of-text or by whitespace and an uppercase letter,
// digit, or opening quote. A trailing fragment without a terminator is
// returned as-is.
inline std::vector<std::string> split_sentences(std::string_view s) {
    std::vector<std::string> out;
    size_t start = 0;
    for (size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c != '.' && c != '!' && c != '?') continue;
        // absorb runs like "?!" or "..."
        size_t j = i;
        while (j + 1 < s.size() &&
               (s[j + 1] == '.' || s[j + 1] == '!' || s[j + 1] == '?'))
            ++j;
        bool boundary = false;
        if (j + 1 >= s.size()) {
            boundary = true;
        } else {
            size_t k = j + 1;
            while (k < s.size() && std::isspace(static_cast<unsigned char>(s[k]))) ++k;
            if (k > j + 1) {
                if (k >= s.size()) {
                    boundary = true;
                } else {
                    unsigned char nc = s[k];
                    boundary = std::isupper(nc) || std::isdigit(nc) ||
                               nc == '"' || nc == '\'' || nc == '(';
                }
            }
        }
        if (boundary && c == '.' &&
            detail::abbreviations().count(detail::token_before(s, i))) {
            boundary = false;
        }
        if (boundary) {
            auto sent = trim(s.substr(start, j + 1 - start));
            if (!sent.empty()) out.push_back(std::move(sent));
            start = j + 1;
        }
        i = j;
    }
    if (start < s.size()) {
        auto tail = trim(s.substr(start));
        if (!tail.empty()) out.push_back(std::move(tail));
    }
    return out;
}

using TokenCounter = std::function<size_t(const std::string&)>;

inline size_t count_whitespace_tokens(const std::string& s) {
    std::istringstream iss(s);
    std::string w;
    size_t n = 0;
    while (iss >> w) ++n;
    return n;
}

inline TokenCounter whitespace_counter() {
    return [](const std::string& s) { return count_whitespace_tokens(s); };
}

// FNV-1a 64-bit, rendered as 16 hex chars. Used for cache keys only.
inline std::string fnv1a_hex(std::string_view s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<size_t>(i)] = digits[h & 0xF];
        h >>= 4;
    }
    return out;
}

}  // namespace groundeval::text
