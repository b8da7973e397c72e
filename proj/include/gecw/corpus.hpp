#pragma once

// Core corpus model: token-span edits over tokenized sentences, grouped by
// annotator. Edits use half-open token spans [start, end) on the source
// side; a zero-width span is an insertion point. Word-order edits may carry
// nested edits inside their span (strictly inside: a zero-width edit sitting
// exactly on a word-order boundary belongs outside it).

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "gecw/labels.hpp"
#include "gecw/util.hpp"

namespace gecw {

struct Edit {
    int start = 0;
    int end = 0;
    ErrorLabel label;
    Tokens correction;  // empty means delete the span
    int annotator = 0;

    bool is_insertion() const noexcept { return start == end; }

    friend bool operator==(const Edit& a, const Edit& b) {
        return a.start == b.start && a.end == b.end && a.label == b.label &&
               a.correction == b.correction && a.annotator == b.annotator;
    }
    friend bool operator!=(const Edit& a, const Edit& b) { return !(a == b); }
};

inline bool is_word_order_edit(const Edit& e) { return e.label.is_word_order(); }

// True when `inner` sits strictly inside the word-order span `wo`. Non-empty
// spans only need containment; insertion points must avoid the boundaries,
// otherwise they are ordinary neighbours of the span.
inline bool nested_in_word_order(const Edit& inner, const Edit& wo) {
    if (!is_word_order_edit(wo)) return false;
    if (&inner == &wo) return false;
    if (inner.start < wo.start || inner.end > wo.end) return false;
    if (inner.is_insertion() && (inner.start == wo.start || inner.start == wo.end)) return false;
    if (is_word_order_edit(inner) && inner.start == wo.start && inner.end == wo.end) return false;
    return true;
}

inline bool spans_properly_overlap(int s1, int e1, int s2, int e2) {
    return s1 < e2 && s2 < e1;
}

struct AnnotatedSentence {
    Tokens source;
    std::vector<Edit> edits;      // all annotators, original file order
    std::vector<int> annotators;  // every annotator id present, including noop-only

    std::vector<Edit> edits_for(int annotator) const {
        std::vector<Edit> out;
        for (const Edit& e : edits)
            if (e.annotator == annotator) out.push_back(e);
        return out;
    }
};

using Corpus = std::vector<AnnotatedSentence>;

struct TaggedSentence {
    Tokens tokens;
    std::vector<std::string> pos;
};

// Checks span bounds and per-annotator span compatibility: two edits from
// the same annotator must not properly overlap unless one of them nests
// inside the other's word-order span.
inline void validate_sentence(const AnnotatedSentence& s, Diagnostics* diag = nullptr) {
    const int n = static_cast<int>(s.source.size());
    if (s.annotators.size() > 3)
        warn_to(diag, "sentence has " + std::to_string(s.annotators.size()) +
                          " annotators, more than the expected three");
    for (const Edit& e : s.edits) {
        if (e.start < 0 || e.end < e.start || e.end > n)
            throw ValidationError("edit span [" + std::to_string(e.start) + ", " +
                                  std::to_string(e.end) + ") out of range for " +
                                  std::to_string(n) + " tokens");
        if (e.label.is_noop())
            throw ValidationError("noop may not appear as a concrete edit");
    }
    std::set<int> ids(s.annotators.begin(), s.annotators.end());
    for (const Edit& e : s.edits)
        if (!ids.count(e.annotator))
            throw ValidationError("edit references unlisted annotator " +
                                  std::to_string(e.annotator));
    for (std::size_t i = 0; i < s.edits.size(); ++i) {
        for (std::size_t j = i + 1; j < s.edits.size(); ++j) {
            const Edit& a = s.edits[i];
            const Edit& b = s.edits[j];
            if (a.annotator != b.annotator) continue;
            if (!spans_properly_overlap(a.start, a.end, b.start, b.end)) continue;
            if (nested_in_word_order(a, b) || nested_in_word_order(b, a)) continue;
            throw ValidationError("annotator " + std::to_string(a.annotator) +
                                  " has overlapping edits at [" + std::to_string(a.start) + ", " +
                                  std::to_string(a.end) + ") and [" + std::to_string(b.start) +
                                  ", " + std::to_string(b.end) + ")");
        }
    }
}

inline void validate_corpus(const Corpus& corpus, Diagnostics* diag = nullptr) {
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        try {
            validate_sentence(corpus[i], diag);
        } catch (const ValidationError& e) {
            throw ValidationError("sentence " + std::to_string(i) + ": " + e.what());
        }
    }
}

// Applies one annotator's edits to the source tokens. Edits nested inside a
// word-order span are dropped: the word-order correction already carries the
// final text for the whole span. Same-point insertions land in list order.
inline Tokens apply_edits(const Tokens& source, const std::vector<Edit>& edits) {
    const int n = static_cast<int>(source.size());
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < edits.size(); ++i) {
        const Edit& e = edits[i];
        if (e.start < 0 || e.end < e.start || e.end > n)
            throw ValidationError("edit span out of range in apply_edits");
        bool nested = false;
        for (const Edit& w : edits)
            if (nested_in_word_order(e, w)) {
                nested = true;
                break;
            }
        if (!nested) keep.push_back(i);
    }
    std::sort(keep.begin(), keep.end(), [&](std::size_t a, std::size_t b) {
        if (edits[a].start != edits[b].start) return edits[a].start < edits[b].start;
        if (edits[a].end != edits[b].end) return edits[a].end < edits[b].end;
        return a < b;
    });
    for (std::size_t k = 1; k < keep.size(); ++k) {
        const Edit& prev = edits[keep[k - 1]];
        const Edit& cur = edits[keep[k]];
        if (spans_properly_overlap(prev.start, prev.end, cur.start, cur.end))
            throw ValidationError("cannot apply overlapping edits");
    }
    Tokens out = source;
    for (auto it = keep.rbegin(); it != keep.rend(); ++it) {
        const Edit& e = edits[*it];
        out.erase(out.begin() + e.start, out.begin() + e.end);
        out.insert(out.begin() + e.start, e.correction.begin(), e.correction.end());
    }
    return out;
}

}  // namespace gecw
