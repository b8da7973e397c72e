#pragma once

// Statistical spelling correction backed by the n-gram model.
//
// Candidates come from a symmetric-delete index over the model vocabulary
// (every vocabulary word is stored under all of its deletions up to depth 2)
// and are verified with optimal-string-alignment Damerau-Levenshtein over
// codepoints. A token is replaced when the sentence log-probability with the
// candidate, minus a per-edit penalty, beats keeping the token; in-vocabulary
// tokens additionally demand a fixed margin, since they might simply be rare
// words. Corrections commit left to right, so each decision sees the already
// corrected prefix.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "gecw/ngram_lm.hpp"
#include "gecw/util.hpp"

namespace gecw {

// ---------------------------------------------------------------------------
// Edit distance with adjacent transposition (optimal string alignment).

inline int osa_distance(const std::vector<char32_t>& a, const std::vector<char32_t>& b) {
    const int n = static_cast<int>(a.size()), m = static_cast<int>(b.size());
    std::vector<int> d((n + 1) * (m + 1), 0);
    auto at = [&](int i, int j) -> int& { return d[i * (m + 1) + j]; };
    for (int i = 0; i <= n; ++i) at(i, 0) = i;
    for (int j = 0; j <= m; ++j) at(0, j) = j;
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= m; ++j) {
            int cost = a[i - 1] == b[j - 1] ? 0 : 1;
            int best = std::min({at(i - 1, j) + 1, at(i, j - 1) + 1, at(i - 1, j - 1) + cost});
            if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1])
                best = std::min(best, at(i - 2, j - 2) + 1);
            at(i, j) = best;
        }
    }
    return at(n, m);
}

inline int osa_distance(std::string_view a, std::string_view b) {
    return osa_distance(utf8_decode(a), utf8_decode(b));
}

// ---------------------------------------------------------------------------
// Symmetric-delete candidate index.

class CandidateIndex {
public:
    struct Candidate {
        std::size_t id;
        std::string word;
        int distance;
    };

    static constexpr int kDepth = 2;

    CandidateIndex() = default;

    explicit CandidateIndex(const std::vector<std::string>& vocab) {
        words_ = vocab;
        for (std::size_t id = 0; id < words_.size(); ++id) {
            auto cps = utf8_decode(words_[id]);
            for (const auto& variant : deletions(cps, kDepth)) index_[variant].push_back(id);
        }
    }

    std::size_t vocab_size() const noexcept { return words_.size(); }
    const std::string& word(std::size_t id) const { return words_.at(id); }

    // All vocabulary words within `max_dist` OSA edits, nearest first (ties
    // alphabetical). An in-vocabulary query is its own candidate at distance 0.
    std::vector<Candidate> candidates(std::string_view token, int max_dist) const {
        if (max_dist > kDepth)
            throw ValidationError("candidate search supports edit distances up to 2");
        std::vector<Candidate> out;
        if (max_dist < 0) return out;
        auto cps = utf8_decode(token);
        std::set<std::size_t> ids;
        for (const auto& variant : deletions(cps, max_dist)) {
            auto it = index_.find(variant);
            if (it == index_.end()) continue;
            ids.insert(it->second.begin(), it->second.end());
        }
        for (std::size_t id : ids) {
            int dist = osa_distance(cps, utf8_decode(words_[id]));
            if (dist <= max_dist) out.push_back({id, words_[id], dist});
        }
        std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
            if (a.distance != b.distance) return a.distance < b.distance;
            return a.word < b.word;
        });
        return out;
    }

private:
    static std::set<std::vector<char32_t>> deletions(const std::vector<char32_t>& cps,
                                                     int depth) {
        std::set<std::vector<char32_t>> out;
        out.insert(cps);
        std::vector<std::vector<char32_t>> frontier = {cps};
        for (int d = 0; d < depth; ++d) {
            std::vector<std::vector<char32_t>> next;
            for (const auto& v : frontier) {
                if (v.empty()) continue;
                for (std::size_t k = 0; k < v.size(); ++k) {
                    std::vector<char32_t> shorter = v;
                    shorter.erase(shorter.begin() + k);
                    if (out.insert(shorter).second) next.push_back(std::move(shorter));
                }
            }
            frontier = std::move(next);
        }
        return out;
    }

    std::vector<std::string> words_;
    std::map<std::vector<char32_t>, std::vector<std::size_t>> index_;
};

// ---------------------------------------------------------------------------
// Correction policy and driver.

// Letters of the Estonian alphabet as written (incl. the loan letters),
// plus hyphen for compounds. Tokens with anything else are left alone.
inline bool is_estonian_word_char(char32_t c) {
    char32_t l = simple_lower(c);
    if (l >= U'a' && l <= U'z') return true;
    switch (l) {
        case 0x00F5:  // o with tilde
        case 0x00E4:  // a with diaeresis
        case 0x00F6:  // o with diaeresis
        case 0x00FC:  // u with diaeresis
        case 0x0161:  // s with caron
        case 0x017E:  // z with caron
            return true;
        default:
            return c == U'-';
    }
}

inline std::set<char32_t> default_estonian_alphabet() {
    std::set<char32_t> out;
    for (char32_t c = U'a'; c <= U'z'; ++c) {
        out.insert(c);
        out.insert(c - 0x20);
    }
    for (char32_t c : {0x00F5, 0x00E4, 0x00F6, 0x00FC, 0x0161, 0x017E,    // lowercase
                       0x00D5, 0x00C4, 0x00D6, 0x00DC, 0x0160, 0x017D})  // uppercase
        out.insert(static_cast<char32_t>(c));
    out.insert(U'-');
    return out;
}

struct SpellPolicy {
    int max_edit_oov = 2;      // unknown tokens
    int max_edit_vocab = 1;    // real-word check for known tokens
    double lambda_distance = 4.0;  // ln-units charged per edit
    double margin = 2.0;           // extra ln-units a known token demands
    double max_length_ratio = 0.4;
    bool protect = true;           // skip digits, acronyms, mid-sentence names
    std::set<char32_t> alphabet = default_estonian_alphabet();
};

inline bool is_correctable_token(std::string_view token, const std::set<char32_t>& alphabet) {
    auto cps = utf8_decode(token);
    if (cps.empty()) return false;
    bool letter = false;
    for (char32_t c : cps) {
        if (!alphabet.count(c)) return false;
        letter = letter || c != U'-';
    }
    return letter;
}

inline bool is_correctable_token(std::string_view token) {
    return is_correctable_token(token, default_estonian_alphabet());
}

// Digits, acronyms and mid-sentence proper names are never touched.
inline bool is_protected_token(std::string_view token, bool sentence_initial) {
    if (contains_digit(token)) return true;
    if (is_all_caps(token)) return true;
    if (!sentence_initial && starts_uppercase(token)) return true;
    return false;
}

struct AppliedCorrection {
    std::size_t index;  // token position in the sentence
    std::string original;
    std::string replacement;
    int distance;
};

struct CorrectionResult {
    Tokens tokens;
    std::vector<AppliedCorrection> applied;
};

inline CorrectionResult correct_sentence(const Tokens& sentence, const NgramLm& lm,
                                         const CandidateIndex& index,
                                         const SpellPolicy& policy = {}) {
    CorrectionResult result;
    Tokens& out = result.tokens;
    out = sentence;
    for (std::size_t t = 0; t < out.size(); ++t) {
        const std::string tok = out[t];
        if (!is_correctable_token(tok, policy.alphabet)) continue;
        if (policy.protect && is_protected_token(tok, t == 0)) continue;
        const bool known = lm.contains(tok);
        const int max_dist = known ? policy.max_edit_vocab : policy.max_edit_oov;
        auto cands = index.candidates(tok, max_dist);
        if (cands.empty()) continue;

        const double tok_len = static_cast<double>(codepoint_count(tok));
        const double keep = lm.sentence_logprob(out);
        double best_score = 0.0;
        const CandidateIndex::Candidate* best = nullptr;
        for (const auto& cand : cands) {
            if (cand.word == tok) continue;
            double diff = std::abs(static_cast<double>(codepoint_count(cand.word)) - tok_len);
            if (diff > policy.max_length_ratio * tok_len) continue;
            Tokens trial = out;
            trial[t] = cand.word;
            double score = lm.sentence_logprob(trial) - policy.lambda_distance * cand.distance;
            if (!best || score > best_score) {
                best = &cand;
                best_score = score;
            }
        }
        if (!best) continue;
        const double threshold = known ? keep + policy.margin : keep;
        if (best_score > threshold) {
            result.applied.push_back({t, tok, best->word, best->distance});
            out[t] = best->word;
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Deterministic replacement lists: wrong<TAB>right token sequences, applied
// longest match first in a single left-to-right pass (no cascading).

class ReplacementList {
public:
    ReplacementList() = default;

    static ReplacementList parse(std::string_view text, Diagnostics* diag = nullptr) {
        ReplacementList list;
        std::map<Tokens, std::size_t> where;
        std::size_t lineno = 0;
        for (std::string& raw : split_on(text, '\n')) {
            ++lineno;
            if (!raw.empty() && raw.back() == '\r') raw.pop_back();
            if (raw.empty() || raw[0] == '#') continue;
            auto fields = split_on(raw, '\t');
            if (fields.size() != 2)
                throw ParseError("expected wrong<TAB>right", lineno);
            Tokens wrong = split_tokens(fields[0]);
            Tokens right = split_tokens(fields[1]);
            if (wrong.empty()) throw ParseError("empty match side", lineno);
            if (auto it = where.find(wrong); it != where.end()) {
                warn_to(diag, "line " + std::to_string(lineno) + ": duplicate entry for '" +
                                  join_tokens(wrong) + "' overrides the earlier one");
                list.entries_[it->second].second = std::move(right);
                continue;
            }
            where[wrong] = list.entries_.size();
            list.entries_.emplace_back(std::move(wrong), std::move(right));
        }
        return list;
    }

    static ReplacementList load_file(const std::string& path, Diagnostics* diag = nullptr) {
        return parse(read_file(path), diag);
    }

    std::size_t size() const noexcept { return entries_.size(); }

    Tokens apply(const Tokens& sentence) const {
        Tokens out;
        std::size_t i = 0;
        while (i < sentence.size()) {
            const std::pair<Tokens, Tokens>* best = nullptr;
            for (const auto& entry : entries_) {
                const Tokens& wrong = entry.first;
                if (best && wrong.size() <= best->first.size()) continue;
                if (i + wrong.size() > sentence.size()) continue;
                if (std::equal(wrong.begin(), wrong.end(), sentence.begin() + i))
                    best = &entry;
            }
            if (best) {
                out.insert(out.end(), best->second.begin(), best->second.end());
                i += best->first.size();
            } else {
                out.push_back(sentence[i]);
                ++i;
            }
        }
        return out;
    }

private:
    std::vector<std::pair<Tokens, Tokens>> entries_;
};

}  // namespace gecw
