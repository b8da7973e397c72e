#pragma once

// Synthetic error generation.
//
// A NoiseProfile holds per-opportunity rates for word-level ops (delete,
// insert, transpose, punctuation delete) and character-level ops (delete,
// insert, transpose), plus frequency tables for what gets inserted. Profiles
// can be estimated from an annotated corpus (the edits of annotator 0) and
// are stored as key=value text with percent-encoded table entries.
//
// The noiser runs a word phase and then a character phase over each clean
// sentence. Every operation is chosen so the emitted gold edits restore the
// clean sentence exactly: apply_edits(noisy, gold) == clean is checked for
// every sentence before it leaves synthesize(). Transpositions only touch
// adjacent pairs of distinct original non-punctuation tokens, and no junk is
// inserted between them, so a transposed pair stays a contiguous span whose
// word-order edit carries the clean text (with nested spelling edits when
// the character phase also hit a member).
//
// Randomness comes from a counter RNG keyed by (seed, sentence index): draws
// happen in one fixed left-to-right order, so any sentence can be
// regenerated independently on any platform.

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gecw/corpus.hpp"
#include "gecw/m2.hpp"
#include "gecw/rng.hpp"
#include "gecw/util.hpp"

namespace gecw {

// ---------------------------------------------------------------------------
// Profile

struct NoiseProfile {
    double char_delete = 0, char_insert = 0, char_transpose = 0;
    double word_delete = 0, word_insert = 0, word_transpose = 0;
    double punct_delete = 0;
    std::map<std::string, std::uint64_t> char_alphabet;   // what char inserts draw from
    std::map<std::string, std::uint64_t> word_unigrams;   // what word inserts draw from

    void validate() const {
        for (double r : {char_delete, char_insert, char_transpose, word_delete, word_insert,
                         word_transpose, punct_delete})
            if (!(r >= 0.0 && r <= 0.5))
                throw ValidationError("noise rates must lie in [0, 0.5]");
        if (char_insert > 0.0 && char_alphabet.empty())
            throw ValidationError("char_insert needs a non-empty char_alphabet");
        if (word_insert > 0.0 && word_unigrams.empty())
            throw ValidationError("word_insert needs non-empty word_unigrams");
    }

    NoiseProfile scaled(double intensity) const {
        if (!(intensity >= 0.0)) throw ValidationError("intensity must be non-negative");
        NoiseProfile p = *this;
        for (double* r : {&p.char_delete, &p.char_insert, &p.char_transpose, &p.word_delete,
                          &p.word_insert, &p.word_transpose, &p.punct_delete})
            *r = std::min(0.5, *r * intensity);
        return p;
    }

    std::string serialize() const;
    static NoiseProfile parse(std::string_view text);
    static NoiseProfile load_file(const std::string& path) { return parse(read_file(path)); }
    void save_file(const std::string& path) const { write_file(path, serialize()); }
};

namespace detail {

inline std::string percent_encode(std::string_view s) {
    static const char* hex = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : s) {
        if (c <= 0x20 || c == 0x7F || c == '%' || c == ',' || c == ':' || c == '=') {
            out.push_back('%');
            out.push_back(hex[c >> 4]);
            out.push_back(hex[c & 0xF]);
        } else {
            out.push_back(static_cast<char>(c));
        }
    }
    return out;
}

inline std::string percent_decode(std::string_view s, std::size_t lineno) {
    auto nibble = [&](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        throw ParseError("bad percent escape", lineno);
    };
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '%') {
            out.push_back(s[i]);
            continue;
        }
        if (i + 2 >= s.size()) throw ParseError("truncated percent escape", lineno);
        out.push_back(static_cast<char>(nibble(s[i + 1]) * 16 + nibble(s[i + 2])));
        i += 2;
    }
    return out;
}

inline std::string format_table(const std::map<std::string, std::uint64_t>& table) {
    std::string out;
    bool first = true;
    for (const auto& [key, count] : table) {
        if (!first) out.push_back(',');
        first = false;
        out += percent_encode(key) + ":" + std::to_string(count);
    }
    return out;
}

inline std::map<std::string, std::uint64_t> parse_table(std::string_view value,
                                                        std::size_t lineno) {
    std::map<std::string, std::uint64_t> table;
    if (value.empty()) return table;
    for (const std::string& item : split_on(value, ',')) {
        std::size_t colon = item.rfind(':');
        if (colon == std::string::npos) throw ParseError("table entry needs key:count", lineno);
        std::string key = percent_decode(std::string_view(item).substr(0, colon), lineno);
        std::uint64_t count = 0;
        for (char c : item.substr(colon + 1)) {
            if (c < '0' || c > '9') throw ParseError("bad table count", lineno);
            count = count * 10 + static_cast<std::uint64_t>(c - '0');
        }
        if (key.empty() || count == 0) throw ParseError("bad table entry", lineno);
        table[key] += count;
    }
    return table;
}

inline std::string format_rate(double r) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", r);
    return buf;
}

}  // namespace detail

inline std::string NoiseProfile::serialize() const {
    std::string out;
    out += "char_delete=" + detail::format_rate(char_delete) + "\n";
    out += "char_insert=" + detail::format_rate(char_insert) + "\n";
    out += "char_transpose=" + detail::format_rate(char_transpose) + "\n";
    out += "word_delete=" + detail::format_rate(word_delete) + "\n";
    out += "word_insert=" + detail::format_rate(word_insert) + "\n";
    out += "word_transpose=" + detail::format_rate(word_transpose) + "\n";
    out += "punct_delete=" + detail::format_rate(punct_delete) + "\n";
    out += "char_alphabet=" + detail::format_table(char_alphabet) + "\n";
    out += "word_unigrams=" + detail::format_table(word_unigrams) + "\n";
    return out;
}

inline NoiseProfile NoiseProfile::parse(std::string_view text) {
    NoiseProfile p;
    std::size_t lineno = 0;
    for (std::string& line : split_on(text, '\n')) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value", lineno);
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        auto rate = [&]() {
            try {
                std::size_t used = 0;
                double r = std::stod(value, &used);
                if (used != value.size()) throw std::invalid_argument("");
                return r;
            } catch (const std::exception&) {
                throw ParseError("bad rate '" + value + "'", lineno);
            }
        };
        if (key == "char_delete")
            p.char_delete = rate();
        else if (key == "char_insert")
            p.char_insert = rate();
        else if (key == "char_transpose")
            p.char_transpose = rate();
        else if (key == "word_delete")
            p.word_delete = rate();
        else if (key == "word_insert")
            p.word_insert = rate();
        else if (key == "word_transpose")
            p.word_transpose = rate();
        else if (key == "punct_delete")
            p.punct_delete = rate();
        else if (key == "char_alphabet")
            p.char_alphabet = detail::parse_table(value, lineno);
        else if (key == "word_unigrams")
            p.word_unigrams = detail::parse_table(value, lineno);
        else
            throw ParseError("unknown profile key '" + key + "'", lineno);
    }
    p.validate();
    return p;
}

// ---------------------------------------------------------------------------
// Estimating a profile from an annotated corpus (annotator 0).

namespace detail {

struct CharDiff {
    double deletions = 0, insertions = 0, transpositions = 0;
};

// Ops that turn `clean` into `noisy` under optimal string alignment.
// Substitutions are split evenly over the three modeled op kinds.
inline CharDiff char_diff(const std::vector<char32_t>& clean,
                          const std::vector<char32_t>& noisy) {
    const int n = static_cast<int>(clean.size()), m = static_cast<int>(noisy.size());
    std::vector<int> d((n + 1) * (m + 1), 0);
    auto at = [&](int i, int j) -> int& { return d[i * (m + 1) + j]; };
    for (int i = 0; i <= n; ++i) at(i, 0) = i;
    for (int j = 0; j <= m; ++j) at(0, j) = j;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= m; ++j) {
            int cost = clean[i - 1] == noisy[j - 1] ? 0 : 1;
            int best = std::min({at(i - 1, j) + 1, at(i, j - 1) + 1, at(i - 1, j - 1) + cost});
            if (i > 1 && j > 1 && clean[i - 1] == noisy[j - 2] && clean[i - 2] == noisy[j - 1])
                best = std::min(best, at(i - 2, j - 2) + 1);
            at(i, j) = best;
        }
    CharDiff out;
    int i = n, j = m;
    while (i > 0 || j > 0) {
        if (i > 1 && j > 1 && clean[i - 1] == noisy[j - 2] && clean[i - 2] == noisy[j - 1] &&
            clean[i - 1] != noisy[j - 1] && at(i, j) == at(i - 2, j - 2) + 1) {
            out.transpositions += 1;
            i -= 2;
            j -= 2;
        } else if (i > 0 && j > 0 &&
                   at(i, j) == at(i - 1, j - 1) + (clean[i - 1] == noisy[j - 1] ? 0 : 1)) {
            if (clean[i - 1] != noisy[j - 1]) {
                out.deletions += 1.0 / 3.0;
                out.insertions += 1.0 / 3.0;
                out.transpositions += 1.0 / 3.0;
            }
            --i;
            --j;
        } else if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
            out.deletions += 1;
            --i;
        } else {
            out.insertions += 1;
            --j;
        }
    }
    return out;
}

}  // namespace detail

// Rates from annotator 0's edits over opportunity counts in the corrected
// text; the insertion tables are the corrected text's character and token
// frequencies. Spelling edits contribute char ops via a character diff in
// the noising direction (corrected -> written); where the diff leaves a
// substitution, the event is split evenly over the three char ops.
inline NoiseProfile derive_noise_profile(const Corpus& corpus, Diagnostics* diag = nullptr) {
    if (corpus.empty())
        throw ValidationError("cannot derive a noise profile from an empty corpus");
    NoiseProfile p;
    double char_del = 0, char_ins = 0, char_tr = 0;
    double word_del = 0, word_ins = 0, word_tr = 0, punct_del = 0;
    double clean_chars = 0, clean_words = 0, clean_puncts = 0;

    for (const AnnotatedSentence& s : corpus) {
        std::vector<Edit> edits = s.edits_for(0);
        Tokens clean = apply_edits(s.source, edits);
        for (const std::string& tok : clean) {
            p.word_unigrams[tok] += 1;
            if (is_punct_token(tok)) {
                clean_puncts += 1;
            } else {
                clean_words += 1;
                clean_chars += static_cast<double>(codepoint_count(tok));
                for (char32_t c : utf8_decode(tok)) {
                    std::string key;
                    utf8_append(key, c);
                    p.char_alphabet[key] += 1;
                }
            }
        }
        for (const Edit& e : edits) {
            const ErrorLabel& label = e.label;
            if (label.is_word_order()) {
                word_tr += 1;
            } else if (label.has_component(BaseLabel::MissingWord)) {
                word_del += static_cast<double>(e.correction.size());
            } else if (label.has_component(BaseLabel::MissingPunct)) {
                punct_del += static_cast<double>(e.correction.size());
            } else if (label.has_component(BaseLabel::UnnecessaryWord)) {
                word_ins += static_cast<double>(e.end - e.start);
            } else if (label.has_component(BaseLabel::Spelling)) {
                if (e.end - e.start == 1 && e.correction.size() == 1) {
                    auto diff = detail::char_diff(utf8_decode(e.correction[0]),
                                                  utf8_decode(s.source[e.start]));
                    char_del += diff.deletions;
                    char_ins += diff.insertions;
                    char_tr += diff.transpositions;
                } else {
                    char_del += 1.0 / 3.0;
                    char_ins += 1.0 / 3.0;
                    char_tr += 1.0 / 3.0;
                }
            }
        }
    }
    auto rate = [&](const char* name, double count, double denom) {
        if (denom <= 0) return 0.0;
        double r = count / denom;
        if (r > 0.5) {
            warn_to(diag, std::string("derived ") + name + " rate " + detail::format_rate(r) +
                              " exceeds 0.5, capping");
            r = 0.5;
        }
        return r;
    };
    p.char_delete = rate("char_delete", char_del, clean_chars);
    p.char_insert = rate("char_insert", char_ins, clean_chars);
    p.char_transpose = rate("char_transpose", char_tr, clean_chars);
    p.word_delete = rate("word_delete", word_del, clean_words);
    p.word_insert = rate("word_insert", word_ins, clean_words);
    p.word_transpose = rate("word_transpose", word_tr, clean_words);
    p.punct_delete = rate("punct_delete", punct_del, clean_puncts);
    return p;
}

// ---------------------------------------------------------------------------
// Noising

struct SynthStats {
    std::uint64_t sentences = 0;
    std::uint64_t word_delete_trials = 0, word_delete_hits = 0;
    std::uint64_t word_insert_trials = 0, word_insert_hits = 0;
    std::uint64_t word_transpose_trials = 0, word_transpose_hits = 0;
    std::uint64_t punct_delete_trials = 0, punct_delete_hits = 0;
    std::uint64_t char_delete_trials = 0, char_delete_hits = 0;
    std::uint64_t char_insert_trials = 0, char_insert_hits = 0;
    std::uint64_t char_transpose_trials = 0, char_transpose_hits = 0;

    std::uint64_t total_hits() const {
        return word_delete_hits + word_insert_hits + word_transpose_hits + punct_delete_hits +
               char_delete_hits + char_insert_hits + char_transpose_hits;
    }
};

// One noised sentence with the edits that undo the damage.
struct SynthRecord {
    Tokens noised;
    std::vector<Edit> gold_edits;
    std::uint64_t seed = 0;  // RNG substream id (the sentence index)
};

namespace detail {

inline std::string sample_table(const std::map<std::string, std::uint64_t>& table,
                                std::uint64_t total, CounterRng& rng) {
    std::uint64_t pick = rng.next_below(total);
    for (const auto& [key, count] : table) {
        if (pick < count) return key;
        pick -= count;
    }
    return table.rbegin()->first;
}

inline std::uint64_t table_total(const std::map<std::string, std::uint64_t>& table) {
    std::uint64_t total = 0;
    for (const auto& [key, count] : table) total += count;
    return total;
}

}  // namespace detail

inline std::vector<SynthRecord> synthesize(const std::vector<Tokens>& clean_sentences,
                                           const NoiseProfile& base_profile,
                                           std::uint64_t master_seed, double intensity = 1.0,
                                           SynthStats* stats = nullptr) {
    NoiseProfile profile = base_profile.scaled(intensity);
    profile.validate();
    const std::uint64_t word_total = detail::table_total(profile.word_unigrams);
    const std::uint64_t char_total = detail::table_total(profile.char_alphabet);

    std::vector<SynthRecord> records;
    records.reserve(clean_sentences.size());
    SynthStats local;
    SynthStats& st = stats ? *stats : local;
    for (std::size_t sidx = 0; sidx < clean_sentences.size(); ++sidx) {
        const Tokens& clean = clean_sentences[sidx];
        const int n = static_cast<int>(clean.size());
        CounterRng rng(master_seed, sidx);
        ++st.sentences;

        // Word phase decisions, one left-to-right pass. Draw order per
        // position: gap insertion, then (for unconsumed tokens) punctuation
        // delete, or transpose followed by word delete.
        std::vector<std::string> junk_before(n + 1);
        std::vector<char> has_junk(n + 1, 0);
        std::vector<char> deleted(n, 0), pair_first(n, 0), consumed(n, 0);
        std::vector<char> punct(n, 0);
        for (int i = 0; i < n; ++i) punct[i] = is_punct_token(clean[i]) ? 1 : 0;

        for (int i = 0; i <= n; ++i) {
            bool interior = i > 0 && i < n && pair_first[i - 1];
            if (!interior && word_total > 0) {
                ++st.word_insert_trials;
                if (rng.bernoulli(profile.word_insert)) {
                    junk_before[i] = detail::sample_table(profile.word_unigrams, word_total,
                                                          rng);
                    has_junk[i] = 1;
                    ++st.word_insert_hits;
                }
            }
            if (i == n || consumed[i]) continue;
            if (punct[i]) {
                ++st.punct_delete_trials;
                if (rng.bernoulli(profile.punct_delete)) {
                    deleted[i] = 1;
                    ++st.punct_delete_hits;
                }
                continue;
            }
            if (i + 1 < n && !punct[i + 1] && clean[i] != clean[i + 1]) {
                ++st.word_transpose_trials;
                if (rng.bernoulli(profile.word_transpose)) {
                    pair_first[i] = 1;
                    consumed[i + 1] = 1;
                    ++st.word_transpose_hits;
                    continue;
                }
            }
            ++st.word_delete_trials;
            if (rng.bernoulli(profile.word_delete)) {
                deleted[i] = 1;
                ++st.word_delete_hits;
            }
        }

        // Materialize the word phase.
        struct NoisyTok {
            std::string text;
            int origin;      // clean index, -1 for junk
            int pair_start;  // clean index of the pair when this opens one
        };
        std::vector<NoisyTok> noisy;
        struct Deletion {
            std::size_t pos;
            int origin;
        };
        std::vector<Deletion> deletions;
        for (int i = 0; i <= n; ++i) {
            if (has_junk[i]) noisy.push_back({junk_before[i], -1, -1});
            if (i == n) break;
            if (consumed[i]) continue;
            if (pair_first[i]) {
                noisy.push_back({clean[i + 1], i + 1, i});
                noisy.push_back({clean[i], i, -1});
                continue;
            }
            if (deleted[i]) {
                deletions.push_back({noisy.size(), i});
                continue;
            }
            noisy.push_back({clean[i], i, -1});
        }

        // Character phase over surviving original word tokens.
        for (NoisyTok& tok : noisy) {
            if (tok.origin < 0 || punct[tok.origin]) continue;
            auto cps = utf8_decode(tok.text);
            for (std::size_t k = 0; k < cps.size();) {
                if (cps.size() > 1) {
                    ++st.char_delete_trials;
                    if (rng.bernoulli(profile.char_delete)) {
                        cps.erase(cps.begin() + k);
                        ++st.char_delete_hits;
                        continue;
                    }
                }
                ++k;
            }
            for (std::size_t k = 0; k <= cps.size();) {
                if (char_total == 0) break;
                ++st.char_insert_trials;
                if (rng.bernoulli(profile.char_insert)) {
                    std::string c = detail::sample_table(profile.char_alphabet, char_total,
                                                         rng);
                    auto ccps = utf8_decode(c);
                    cps.insert(cps.begin() + k, ccps.begin(), ccps.end());
                    k += ccps.size() + 1;
                    ++st.char_insert_hits;
                } else {
                    ++k;
                }
            }
            for (std::size_t k = 0; k + 1 < cps.size();) {
                if (cps[k] != cps[k + 1]) {
                    ++st.char_transpose_trials;
                    if (rng.bernoulli(profile.char_transpose)) {
                        std::swap(cps[k], cps[k + 1]);
                        ++st.char_transpose_hits;
                        k += 2;
                        continue;
                    }
                }
                ++k;
            }
            tok.text = utf8_encode(cps);
        }

        // Gold edits in noisy coordinates, restoring the clean sentence.
        AnnotatedSentence out;
        out.annotators = {0};
        std::size_t drec = 0;
        for (std::size_t p = 0; p <= noisy.size(); ++p) {
            while (drec < deletions.size() && deletions[drec].pos == p) {
                const int origin = deletions[drec].origin;
                Edit e;
                e.start = e.end = static_cast<int>(p);
                e.label = ErrorLabel::simple(punct[origin] ? BaseLabel::MissingPunct
                                                           : BaseLabel::MissingWord);
                e.correction = {clean[origin]};
                out.edits.push_back(std::move(e));
                ++drec;
            }
            if (p == noisy.size()) break;
            const NoisyTok& tok = noisy[p];
            if (tok.origin < 0) {
                Edit e;
                e.start = static_cast<int>(p);
                e.end = static_cast<int>(p) + 1;
                e.label = ErrorLabel::simple(BaseLabel::UnnecessaryWord);
                out.edits.push_back(std::move(e));
                continue;
            }
            if (tok.pair_start >= 0) {
                const int i = tok.pair_start;
                Edit wo;
                wo.start = static_cast<int>(p);
                wo.end = static_cast<int>(p) + 2;
                wo.label = ErrorLabel::simple(BaseLabel::WordOrder);
                wo.correction = {clean[i], clean[i + 1]};
                out.edits.push_back(std::move(wo));
                for (int member = 0; member < 2; ++member) {
                    const NoisyTok& m = noisy[p + member];
                    if (m.text == clean[m.origin]) continue;
                    Edit sp;
                    sp.start = static_cast<int>(p) + member;
                    sp.end = sp.start + 1;
                    sp.label = ErrorLabel::simple(BaseLabel::Spelling);
                    sp.correction = {clean[m.origin]};
                    out.edits.push_back(std::move(sp));
                }
                ++p;  // second member handled
                continue;
            }
            if (tok.text != clean[tok.origin]) {
                Edit e;
                e.start = static_cast<int>(p);
                e.end = static_cast<int>(p) + 1;
                e.label = ErrorLabel::simple(BaseLabel::Spelling);
                e.correction = {clean[tok.origin]};
                out.edits.push_back(std::move(e));
            }
        }
        for (const NoisyTok& tok : noisy) out.source.push_back(tok.text);

        validate_sentence(out);
        if (apply_edits(out.source, out.edits) != clean)
            throw ValidationError("synthesis produced non-restoring edits for sentence " +
                                  std::to_string(sidx));
        records.push_back({std::move(out.source), std::move(out.edits), sidx});
    }
    return records;
}

// Standard M2 with the noised sentence on the S line and the restorative
// edits as annotator 0. The records must still invert to the clean text.
inline std::string write_synth_m2(const std::vector<SynthRecord>& records,
                                  const std::vector<Tokens>& clean_sentences) {
    if (records.size() != clean_sentences.size())
        throw ValidationError("record count does not match the clean sentence count");
    Corpus corpus;
    corpus.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        AnnotatedSentence s;
        s.source = records[i].noised;
        s.edits = records[i].gold_edits;
        s.annotators = {0};
        if (apply_edits(s.source, s.edits) != clean_sentences[i])
            throw ValidationError("record " + std::to_string(i) +
                                  " does not restore its clean sentence");
        corpus.push_back(std::move(s));
    }
    return serialize_m2(corpus);
}

}  // namespace gecw
