#pragma once

// MaxMatch-style scoring of corrected text against multi-annotator gold
// edits.
//
// The hypothesis is aligned to the source with token Levenshtein costs
// (match 0, substitution 1, case-only substitution 0.5, insert/delete 1;
// stored doubled so everything stays integral). All cost-optimal alignments
// are kept as a lattice, and system edits are read off it by grouping runs
// of adjacent non-match operations, up to max_merge_span source tokens per
// group (default 4). A dynamic program over the lattice picks, per
// annotator, the grouping that matches the most gold edits (and among
// those, proposes the fewest unmatched edits). The per-sentence annotator
// is then chosen by the F-score against the running corpus counts (or the
// sentence-local counts, behind an option), lower annotator id winning
// ties.
//
// Word-order edits are special: they match when some optimal reading of the
// hypothesis span equals the reordered correction with each single-token
// nested edit either applied or not. Unmatched system edits inside a matched
// word-order region are not charged as false positives.

#include <bit>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gecw/corpus.hpp"
#include "gecw/labels.hpp"
#include "gecw/util.hpp"

namespace gecw {

// ---------------------------------------------------------------------------
// F-scores. By convention precision is 1 when nothing was proposed and
// recall is 1 when there was nothing to find; a 0/0 F-score is 0.

inline double precision_value(long long tp, long long fp) {
    return (tp + fp) == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
}

inline double recall_value(long long tp, long long fn) {
    return (tp + fn) == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
}

inline double f_beta_pr(double p, double r, double beta) {
    double denom = beta * beta * p + r;
    if (denom == 0.0) return 0.0;
    return (1.0 + beta * beta) * p * r / denom;
}

inline double f_beta(long long tp, long long fp, long long fn, double beta) {
    return f_beta_pr(precision_value(tp, fp), recall_value(tp, fn), beta);
}

struct Counts {
    long long tp = 0, fp = 0, fn = 0;
};

enum class AnnotatorSelection { Running, Local };

struct ScorerOptions {
    double beta = 0.5;
    int max_merge_span = 4;
    AnnotatorSelection selection = AnnotatorSelection::Running;
};

// ---------------------------------------------------------------------------
// Alignment lattice

namespace detail {

enum class Op : unsigned char { Match, Sub, Del, Ins };

inline int align_cost(const std::string& a, const std::string& b) {
    if (a == b) return 0;
    if (ci_equal(a, b)) return 1;
    return 2;
}

struct AlignGraph {
    int slen = 0, hlen = 0;
    Tokens src, hyp;
    std::vector<int> fw, bw;

    int f(int i, int j) const { return fw[i * (hlen + 1) + j]; }
    int b(int i, int j) const { return bw[i * (hlen + 1) + j]; }
    int total() const { return f(slen, hlen); }

    bool node_optimal(int i, int j) const { return f(i, j) + b(i, j) == total(); }

    // Is the edge leaving (i, j) with this operation on some optimal path?
    bool edge_optimal(int i, int j, Op op) const {
        switch (op) {
            case Op::Match:
            case Op::Sub: {
                if (i >= slen || j >= hlen) return false;
                int c = align_cost(src[i], hyp[j]);
                if ((op == Op::Match) != (c == 0)) return false;
                return f(i, j) + c + b(i + 1, j + 1) == total();
            }
            case Op::Del:
                return i < slen && f(i, j) + 2 + b(i + 1, j) == total();
            case Op::Ins:
                return j < hlen && f(i, j) + 2 + b(i, j + 1) == total();
        }
        return false;
    }
};

inline AlignGraph build_align_graph(Tokens src, Tokens hyp) {
    AlignGraph g;
    g.slen = static_cast<int>(src.size());
    g.hlen = static_cast<int>(hyp.size());
    g.src = std::move(src);
    g.hyp = std::move(hyp);
    const int w = g.hlen + 1;
    g.fw.assign((g.slen + 1) * w, 0);
    g.bw.assign((g.slen + 1) * w, 0);
    for (int i = 0; i <= g.slen; ++i) {
        for (int j = 0; j <= g.hlen; ++j) {
            if (i == 0 && j == 0) continue;
            int best = 1 << 28;
            if (i > 0 && j > 0)
                best = std::min(best,
                                g.fw[(i - 1) * w + j - 1] + align_cost(g.src[i - 1], g.hyp[j - 1]));
            if (i > 0) best = std::min(best, g.fw[(i - 1) * w + j] + 2);
            if (j > 0) best = std::min(best, g.fw[i * w + j - 1] + 2);
            g.fw[i * w + j] = best;
        }
    }
    for (int i = g.slen; i >= 0; --i) {
        for (int j = g.hlen; j >= 0; --j) {
            if (i == g.slen && j == g.hlen) continue;
            int best = 1 << 28;
            if (i < g.slen && j < g.hlen)
                best = std::min(best, g.bw[(i + 1) * w + j + 1] + align_cost(g.src[i], g.hyp[j]));
            if (i < g.slen) best = std::min(best, g.bw[(i + 1) * w + j] + 2);
            if (j < g.hlen) best = std::min(best, g.bw[i * w + j + 1] + 2);
            g.bw[i * w + j] = best;
        }
    }
    return g;
}

// True when an optimal subpath (any operations) runs (i0, j0) -> (i1, j1).
inline bool opt_reachable(const AlignGraph& g, int i0, int j0, int i1, int j1) {
    if (i1 < i0 || j1 < j0) return false;
    if (!g.node_optimal(i0, j0) || !g.node_optimal(i1, j1)) return false;
    const int rows = i1 - i0 + 1, cols = j1 - j0 + 1;
    std::vector<char> reach(rows * cols, 0);
    reach[0] = 1;
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            if (!reach[i * cols + j]) continue;
            const int ai = i0 + i, aj = j0 + j;
            if (i + 1 < rows && j + 1 < cols &&
                (g.edge_optimal(ai, aj, Op::Match) || g.edge_optimal(ai, aj, Op::Sub)))
                reach[(i + 1) * cols + j + 1] = 1;
            if (i + 1 < rows && g.edge_optimal(ai, aj, Op::Del)) reach[(i + 1) * cols + j] = 1;
            if (j + 1 < cols && g.edge_optimal(ai, aj, Op::Ins)) reach[i * cols + j + 1] = 1;
        }
    }
    return reach[rows * cols - 1] != 0;
}

}  // namespace detail

// A system edit read off the alignment: source span and hypothesis span.
struct SpanEdit {
    int src_start = 0, src_end = 0;
    int hyp_start = 0, hyp_end = 0;
    friend bool operator==(const SpanEdit&, const SpanEdit&) = default;
};

// Overlap for detection credit: insertion points touch on closed intervals,
// everything else must properly overlap.
inline bool detection_overlap(int s1, int e1, int s2, int e2) {
    if (s1 == e1 || s2 == e2) return s1 <= e2 && s2 <= e1;
    return s1 < e2 && s2 < e1;
}

// All cost-optimal alignments of one hypothesis against its source, plus the
// grouping bound. Every way of walking the optimal edges and carving the
// non-match runs into groups of at most max_merge_span source tokens is one
// candidate system edit set; the scoring DP maximizes over all of them.
struct HypothesisLattice {
    detail::AlignGraph graph;
    int max_merge_span = 4;

    const Tokens& source() const { return graph.src; }
    const Tokens& hypothesis() const { return graph.hyp; }

    // Endpoints reachable from (i, j) through one group of non-match edges.
    std::set<std::pair<int, int>> group_ends(int i, int j) const {
        std::set<std::pair<int, int>> ends;
        std::vector<std::pair<int, int>> queue = {{i, j}};
        std::set<std::pair<int, int>> visited = {{i, j}};
        while (!queue.empty()) {
            auto [x, y] = queue.back();
            queue.pop_back();
            auto step = [&](int nx, int ny) {
                if (visited.insert({nx, ny}).second) {
                    ends.insert({nx, ny});
                    queue.push_back({nx, ny});
                }
            };
            if (x - i < max_merge_span) {
                if (graph.edge_optimal(x, y, detail::Op::Sub)) step(x + 1, y + 1);
                if (graph.edge_optimal(x, y, detail::Op::Del)) step(x + 1, y);
            }
            if (graph.edge_optimal(x, y, detail::Op::Ins)) step(x, y + 1);
        }
        return ends;
    }

    // Every edit set the lattice admits, for small fixtures and tests.
    std::vector<std::vector<SpanEdit>> edit_sets(std::size_t limit = 100000) const {
        std::vector<std::vector<SpanEdit>> out;
        std::vector<SpanEdit> cur;
        walk(0, 0, cur, out, limit);
        return out;
    }

private:
    void walk(int i, int j, std::vector<SpanEdit>& cur, std::vector<std::vector<SpanEdit>>& out,
              std::size_t limit) const {
        if (out.size() >= limit) throw ValidationError("alignment lattice too large to list");
        if (i == graph.slen && j == graph.hlen) {
            out.push_back(cur);
            return;
        }
        if (graph.edge_optimal(i, j, detail::Op::Match)) walk(i + 1, j + 1, cur, out, limit);
        for (auto [vi, vj] : group_ends(i, j)) {
            cur.push_back({i, vi, j, vj});
            walk(vi, vj, cur, out, limit);
            cur.pop_back();
        }
    }
};

inline HypothesisLattice extract_edits(const Tokens& source, const Tokens& hypothesis,
                                       int max_merge_span = 4) {
    if (max_merge_span < 1) throw ValidationError("merge span must be at least 1");
    return {detail::build_align_graph(source, hypothesis), max_merge_span};
}

inline constexpr std::size_t kMaxNestedEnumeration = 8;

namespace detail {

struct WoVariant {
    Tokens seq;
    std::uint32_t applied = 0;  // bit k: nested edit k applied
};

// All readings of a word-order correction with each single-token nested edit
// applied or reverted. Falls back to "everything applied" when a nested edit
// is not a 1:1 substitution (or there are too many to enumerate).
inline std::vector<WoVariant> wo_variants(const Tokens& correction, const Tokens& src,
                                          const std::vector<const Edit*>& nested) {
    std::uint32_t full = nested.empty() ? 0 : ((1u << nested.size()) - 1);
    bool enumerable = nested.size() <= kMaxNestedEnumeration;
    for (const Edit* e : nested)
        if (e->end - e->start != 1 || e->correction.size() != 1) enumerable = false;
    if (!enumerable) return {{correction, full}};

    std::vector<WoVariant> variants = {{correction, 0}};
    for (std::size_t k = 0; k < nested.size(); ++k) {
        const std::string& corrected = nested[k]->correction[0];
        const std::string& original = src[nested[k]->start];
        std::vector<WoVariant> next;
        std::set<std::pair<Tokens, std::uint32_t>> seen;
        auto add = [&](Tokens seq, std::uint32_t applied) {
            if (seen.emplace(seq, applied).second) next.push_back({std::move(seq), applied});
        };
        for (const WoVariant& v : variants) {
            add(v.seq, v.applied | (1u << k));
            for (std::size_t p = 0; p < v.seq.size(); ++p) {
                if (v.seq[p] != corrected) continue;
                Tokens seq = v.seq;
                seq[p] = original;
                add(std::move(seq), v.applied);
            }
        }
        variants = std::move(next);
    }
    return variants;
}

inline bool range_equal(const Tokens& hyp, int from, int to, const Tokens& want) {
    if (to - from != static_cast<int>(want.size())) return false;
    for (int k = from; k < to; ++k)
        if (hyp[k] != want[k - from]) return false;
    return true;
}

struct WoResolution {
    bool found = false;
    int a = 0, b = 0;              // hypothesis segment credited to the edit
    std::uint32_t applied = 0;     // nested edits realized inside it
};

inline WoResolution resolve_wo(const HypothesisLattice& lat, const Edit& wo,
                               const std::vector<const Edit*>& nested) {
    const AlignGraph& graph = lat.graph;
    auto variants = wo_variants(wo.correction, graph.src, nested);
    WoResolution best;
    int best_applied_count = -1;
    for (int a = 0; a <= graph.hlen; ++a) {
        if (!graph.node_optimal(wo.start, a)) continue;
        for (int b = a; b <= graph.hlen; ++b) {
            if (!graph.node_optimal(wo.end, b)) continue;
            if (!opt_reachable(graph, wo.start, a, wo.end, b)) continue;
            for (const WoVariant& v : variants) {
                if (!range_equal(graph.hyp, a, b, v.seq)) continue;
                int applied_count = std::popcount(v.applied);
                if (applied_count > best_applied_count) {
                    best_applied_count = applied_count;
                    best = {true, a, b, v.applied};
                }
            }
        }
    }
    return best;
}

}  // namespace detail

// Does the hypothesis realize this word-order edit (with any subset of its
// nested single-token edits applied)?
inline bool wo_match(const Edit& word_order, const std::vector<Edit>& nested,
                     const HypothesisLattice& lattice) {
    std::vector<const Edit*> ptrs;
    ptrs.reserve(nested.size());
    for (const Edit& e : nested) ptrs.push_back(&e);
    return detail::resolve_wo(lattice, word_order, ptrs).found;
}

// One annotator's verdict on one sentence.
struct AnnotatorScore {
    long long tp = 0, fp = 0, fn = 0;
    std::vector<char> gold_matched;
    std::vector<SpanEdit> proposed;
};

// Scores a hypothesis against one annotator's gold edits.
inline AnnotatorScore score_hypothesis_edits(const HypothesisLattice& lat,
                                             const std::vector<Edit>& gold) {
    const detail::AlignGraph& graph = lat.graph;
    const int slen = graph.slen, hlen = graph.hlen;
    const Tokens& hyp = graph.hyp;
    for (const Edit& g : gold)
        if (g.start < 0 || g.end < g.start || g.end > slen)
            throw ValidationError("gold edit span out of range");

    std::vector<char> matched(gold.size(), 0);
    std::vector<char> in_dp(gold.size(), 1);
    struct ExemptRegion {
        int ws, we, a, b;
    };
    std::vector<ExemptRegion> exempt;

    // Word-order edits first: they are resolved on span content, not spans.
    for (std::size_t wi = 0; wi < gold.size(); ++wi) {
        if (!gold[wi].label.is_word_order()) continue;
        in_dp[wi] = 0;
        const Edit& w = gold[wi];
        std::vector<const Edit*> nested;
        std::vector<std::size_t> nested_idx;
        for (std::size_t k = 0; k < gold.size(); ++k) {
            if (k == wi || !nested_in_word_order(gold[k], w)) continue;
            nested.push_back(&gold[k]);
            nested_idx.push_back(k);
        }
        detail::WoResolution res = detail::resolve_wo(lat, w, nested);
        if (res.found) {
            matched[wi] = 1;
            exempt.push_back({w.start, w.end, res.a, res.b});
            for (std::size_t k = 0; k < nested_idx.size(); ++k) {
                if (res.applied & (1u << k)) {
                    matched[nested_idx[k]] = 1;
                    in_dp[nested_idx[k]] = 0;
                }
            }
        }
    }

    // Remaining gold edits go into the lattice DP.
    std::vector<std::size_t> dp_gold;
    for (std::size_t k = 0; k < gold.size(); ++k)
        if (in_dp[k]) dp_gold.push_back(k);
    if (dp_gold.size() > 63) throw ValidationError("more than 63 gold edits for one annotator");
    std::map<std::pair<int, int>, std::vector<std::size_t>> by_span;
    std::uint64_t insertion_golds = 0;
    for (std::size_t p = 0; p < dp_gold.size(); ++p) {
        const Edit& g = gold[dp_gold[p]];
        by_span[{g.start, g.end}].push_back(p);
        if (g.start == g.end) insertion_golds |= std::uint64_t(1) << p;
    }

    auto is_exempt = [&](int s, int e, int hs, int he) {
        for (const ExemptRegion& r : exempt)
            if (r.ws <= s && e <= r.we && r.a <= hs && he <= r.b) return true;
        return false;
    };

    struct Entry {
        std::uint64_t mask = 0;
        int fp = 0;
        std::vector<SpanEdit> edits;
    };
    const int w = hlen + 1;
    std::vector<std::vector<Entry>> state((slen + 1) * w);

    // An entry is dropped when another has matched a superset of its gold
    // edits at no greater cost -- except that an insertion-point gold still
    // claimable downstream must not separate the two masks, since claiming
    // it again later changes the cost.
    auto push = [&](int i, int j, Entry entry) {
        auto& cell = state[i * w + j];
        for (const Entry& e : cell) {
            std::uint64_t extra = e.mask & ~entry.mask;
            if ((e.mask & entry.mask) == entry.mask && e.fp <= entry.fp &&
                (extra & insertion_golds) == 0)
                return;
        }
        std::erase_if(cell, [&](const Entry& e) {
            std::uint64_t extra = entry.mask & ~e.mask;
            return (entry.mask & e.mask) == e.mask && entry.fp <= e.fp &&
                   (extra & insertion_golds) == 0;
        });
        cell.push_back(std::move(entry));
    };

    push(0, 0, Entry{});
    for (int i = 0; i <= slen; ++i) {
        for (int j = 0; j <= hlen; ++j) {
            auto cell = state[i * w + j];  // copy: pushes may touch later cells only
            if (cell.empty()) continue;
            auto ends = lat.group_ends(i, j);
            for (const Entry& entry : cell) {
                if (graph.edge_optimal(i, j, detail::Op::Match)) push(i + 1, j + 1, entry);
                for (auto [vi, vj] : ends) {
                    Entry next = entry;
                    next.edits.push_back({i, vi, j, vj});
                    bool hit = false;
                    if (auto it = by_span.find({i, vi}); it != by_span.end()) {
                        for (std::size_t p : it->second) {
                            if (next.mask >> p & 1) continue;
                            if (!detail::range_equal(hyp, j, vj, gold[dp_gold[p]].correction))
                                continue;
                            next.mask |= std::uint64_t(1) << p;
                            hit = true;
                            break;
                        }
                    }
                    if (!hit && !is_exempt(i, vi, j, vj)) ++next.fp;
                    push(vi, vj, std::move(next));
                }
            }
        }
    }

    const Entry* best = nullptr;
    for (const Entry& e : state[slen * w + hlen]) {
        if (!best || std::popcount(e.mask) > std::popcount(best->mask) ||
            (std::popcount(e.mask) == std::popcount(best->mask) && e.fp < best->fp))
            best = &e;
    }
    if (!best) throw ValidationError("alignment lattice has no terminal path");

    AnnotatorScore out;
    for (std::size_t p = 0; p < dp_gold.size(); ++p)
        if (best->mask >> p & 1) matched[dp_gold[p]] = 1;
    out.gold_matched = matched;
    for (char m : matched) out.tp += m ? 1 : 0;
    out.fn = static_cast<long long>(gold.size()) - out.tp;
    out.fp = best->fp;
    out.proposed = best->edits;
    return out;
}

inline AnnotatorScore score_hypothesis_edits(const Tokens& src, const Tokens& hyp,
                                             const std::vector<Edit>& gold,
                                             int max_merge_span = 4) {
    return score_hypothesis_edits(extract_edits(src, hyp, max_merge_span), gold);
}

// ---------------------------------------------------------------------------
// Corpus-level scoring

struct TypeCount {
    long long tp = 0, fn = 0;
};

// The chosen annotator's verdict on one sentence, with per-label tallies.
struct SentenceScore {
    int annotator = 0;
    Counts counts;
    Counts detection;
    std::map<std::string, TypeCount> by_type;
    std::map<std::string, TypeCount> by_type_detection;
};

inline SentenceScore max_match_sentence(const AnnotatedSentence& sentence,
                                        const HypothesisLattice& lat, const Counts& running,
                                        const ScorerOptions& opt = {}) {
    std::vector<int> annotators = sentence.annotators;
    if (annotators.empty()) annotators.push_back(0);

    int chosen = -1;
    AnnotatorScore best;
    double best_f = -1.0;
    for (int a : annotators) {
        AnnotatorScore sc = score_hypothesis_edits(lat, sentence.edits_for(a));
        double f = opt.selection == AnnotatorSelection::Running
                       ? f_beta(running.tp + sc.tp, running.fp + sc.fp, running.fn + sc.fn,
                                opt.beta)
                       : f_beta(sc.tp, sc.fp, sc.fn, opt.beta);
        if (f > best_f) {
            best_f = f;
            best = std::move(sc);
            chosen = a;
        }
    }

    SentenceScore out;
    out.annotator = chosen;
    out.counts = {best.tp, best.fp, best.fn};
    std::vector<Edit> gedits = sentence.edits_for(chosen);
    for (std::size_t k = 0; k < gedits.size(); ++k) {
        bool det = false;
        for (const SpanEdit& p : best.proposed)
            det = det ||
                  detection_overlap(gedits[k].start, gedits[k].end, p.src_start, p.src_end);
        out.detection.tp += det ? 1 : 0;
        out.detection.fn += det ? 0 : 1;
        for (BaseLabel c : gedits[k].label.base_components()) {
            TypeCount& t = out.by_type[std::string(to_code(c))];
            TypeCount& d = out.by_type_detection[std::string(to_code(c))];
            (best.gold_matched[k] ? t.tp : t.fn) += 1;
            (det ? d.tp : d.fn) += 1;
        }
    }
    for (const SpanEdit& p : best.proposed) {
        bool det = false;
        for (const Edit& g : gedits)
            det = det || detection_overlap(g.start, g.end, p.src_start, p.src_end);
        out.detection.fp += det ? 0 : 1;
    }
    return out;
}

inline SentenceScore max_match_sentence(const AnnotatedSentence& sentence, const Tokens& hyp,
                                        const Counts& running, const ScorerOptions& opt = {}) {
    return max_match_sentence(sentence, extract_edits(sentence.source, hyp, opt.max_merge_span),
                              running, opt);
}

struct ScoreReport {
    long long tp = 0, fp = 0, fn = 0;
    long long det_tp = 0, det_fp = 0, det_fn = 0;
    std::map<std::string, TypeCount> by_type;
    std::map<std::string, TypeCount> by_type_detection;
    std::vector<SentenceScore> per_sentence;

    double precision() const { return precision_value(tp, fp); }
    double recall() const { return recall_value(tp, fn); }
    double f05() const { return f_beta(tp, fp, fn, 0.5); }
    double det_precision() const { return precision_value(det_tp, det_fp); }
    double det_recall() const { return recall_value(det_tp, det_fn); }
    double det_f05() const { return f_beta(det_tp, det_fp, det_fn, 0.5); }
};

// Alignment lattices are built per sentence (in parallel when jobs > 1),
// then reduced sequentially in corpus order so the greedy annotator
// selection stays deterministic.
inline ScoreReport score_corpus(const Corpus& gold, const std::vector<Tokens>& hyp,
                                const ScorerOptions& opt = {}, unsigned jobs = 1) {
    if (gold.size() != hyp.size())
        throw ValidationError("hypothesis has " + std::to_string(hyp.size()) +
                              " sentences, gold has " + std::to_string(gold.size()));
    std::vector<HypothesisLattice> lattices(gold.size());
    parallel_for(gold.size(), jobs, [&](std::size_t i) {
        lattices[i] = extract_edits(gold[i].source, hyp[i], opt.max_merge_span);
    });
    ScoreReport rep;
    Counts running;
    for (std::size_t idx = 0; idx < gold.size(); ++idx) {
        SentenceScore sc = max_match_sentence(gold[idx], lattices[idx], running, opt);
        running.tp += sc.counts.tp;
        running.fp += sc.counts.fp;
        running.fn += sc.counts.fn;
        rep.det_tp += sc.detection.tp;
        rep.det_fp += sc.detection.fp;
        rep.det_fn += sc.detection.fn;
        for (const auto& [code, t] : sc.by_type) {
            rep.by_type[code].tp += t.tp;
            rep.by_type[code].fn += t.fn;
        }
        for (const auto& [code, t] : sc.by_type_detection) {
            rep.by_type_detection[code].tp += t.tp;
            rep.by_type_detection[code].fn += t.fn;
        }
        rep.per_sentence.push_back(std::move(sc));
    }
    rep.tp = running.tp;
    rep.fp = running.fp;
    rep.fn = running.fn;
    return rep;
}

// Machine-readable key=value report.
inline std::string format_report(const ScoreReport& r) {
    std::string out;
    out += "precision=" + format_fixed4(r.precision()) + "\n";
    out += "recall=" + format_fixed4(r.recall()) + "\n";
    out += "f05=" + format_fixed4(r.f05()) + "\n";
    for (std::string_view code : kBaseLabelCodes) {
        auto it = r.by_type.find(std::string(code));
        if (it == r.by_type.end()) continue;
        out += "recall[" + std::string(code) +
               "]=" + format_fixed4(recall_value(it->second.tp, it->second.fn)) + "\n";
    }
    out += "detection_precision=" + format_fixed4(r.det_precision()) + "\n";
    out += "detection_recall=" + format_fixed4(r.det_recall()) + "\n";
    out += "detection_f05=" + format_fixed4(r.det_f05()) + "\n";
    for (std::string_view code : kBaseLabelCodes) {
        auto it = r.by_type_detection.find(std::string(code));
        if (it == r.by_type_detection.end()) continue;
        out += "detection_recall[" + std::string(code) +
               "]=" + format_fixed4(recall_value(it->second.tp, it->second.fn)) + "\n";
    }
    return out;
}

// Human-readable table.
inline std::string format_report_table(const ScoreReport& r) {
    auto row = [](std::string_view name, long long tp, long long x, long long fn, double p,
                  double rr, double f) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%-12s %6lld %6lld %6lld   %s %s %s\n",
                      std::string(name).c_str(), tp, x, fn, format_fixed4(p).c_str(),
                      format_fixed4(rr).c_str(), format_fixed4(f).c_str());
        return std::string(buf);
    };
    std::string out = "                 TP     FP     FN        P      R   F0.5\n";
    out += row("correction", r.tp, r.fp, r.fn, r.precision(), r.recall(), r.f05());
    out += row("detection", r.det_tp, r.det_fp, r.det_fn, r.det_precision(), r.det_recall(),
               r.det_f05());
    bool header = false;
    for (std::string_view code : kBaseLabelCodes) {
        auto it = r.by_type.find(std::string(code));
        if (it == r.by_type.end()) continue;
        if (!header) {
            out += "\nper-label recall   corrected  detected   of\n";
            header = true;
        }
        auto dt = r.by_type_detection.find(std::string(code));
        double drec = dt == r.by_type_detection.end()
                          ? 1.0
                          : recall_value(dt->second.tp, dt->second.fn);
        char buf[160];
        std::snprintf(buf, sizeof buf, "%-18s    %s    %s %4lld\n",
                      std::string(code).c_str(),
                      format_fixed4(recall_value(it->second.tp, it->second.fn)).c_str(),
                      format_fixed4(drec).c_str(), it->second.tp + it->second.fn);
        out += buf;
    }
    return out;
}

}  // namespace gecw
