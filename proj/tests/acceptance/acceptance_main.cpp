// Acceptance gate. Each criterion exercises the library end to end against
// hand-computed fixtures or the brute-force references in oracles.hpp and
// prints exactly one pass/FAIL line; the exit code is the failure count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "gecw/conllu.hpp"
#include "gecw/corpus.hpp"
#include "gecw/m2.hpp"
#include "gecw/ngram_lm.hpp"
#include "gecw/rng.hpp"
#include "gecw/scorer.hpp"
#include "gecw/spellkit.hpp"
#include "gecw/synth.hpp"
#include "gecw/util.hpp"
#include "gecw/wo_detect.hpp"
#include "oracles.hpp"

using namespace gecw;

namespace {

struct Check {
    bool ok = true;
    std::string why;

    void require(bool cond, const std::string& msg) {
        if (ok && !cond) {
            ok = false;
            why = msg;
        }
    }
};

struct Rng {
    std::mt19937 gen;
    explicit Rng(unsigned seed) : gen(seed) {}
    int below(int n) { return n <= 1 ? 0 : static_cast<int>(gen() % static_cast<unsigned>(n)); }
};

Edit mk(int s, int e, Tokens corr, BaseLabel label = BaseLabel::WordChoice, int annotator = 0) {
    Edit out;
    out.start = s;
    out.end = e;
    out.label = ErrorLabel::simple(label);
    out.correction = std::move(corr);
    out.annotator = annotator;
    return out;
}

Tokens pick_tokens(Rng& rng, const Tokens& pool, int len) {
    Tokens out;
    for (int i = 0; i < len; ++i) out.push_back(pool[rng.below(static_cast<int>(pool.size()))]);
    return out;
}

bool spans_clash(int s1, int e1, int s2, int e2) {
    if (s1 == s2 && e1 == e2) return true;
    return s1 < e2 && s2 < e1;
}

int net_change(const Edit& g) {
    return static_cast<int>(g.correction.size()) - (g.end - g.start);
}

// Growing and shrinking edits near each other can collapse into plain
// substitutions on a cheaper alignment, which pulls the gold decomposition
// off every optimal path. With distinct source tokens and corrections drawn
// from a disjoint pool, merging a run of edits by sacrificing the D
// untouched source tokens inside the run changes the alignment value by
// exactly 2 * (min(grow, shrink) - D), where grow and shrink total the
// positive and negative net length changes of the run. The gold set stays
// on an optimal alignment iff no contiguous run comes out strictly ahead.
bool anchors_hold(std::vector<Edit> gold, int n) {
    std::sort(gold.begin(), gold.end(),
              [](const Edit& a, const Edit& b) { return a.start < b.start; });
    std::vector<char> covered(static_cast<std::size_t>(n), 0);
    for (const Edit& g : gold)
        for (int i = g.start; i < g.end; ++i) covered[static_cast<std::size_t>(i)] = 1;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        int grow = 0, shrink = 0;
        for (std::size_t j = i; j < gold.size(); ++j) {
            const int net = net_change(gold[j]);
            grow += std::max(net, 0);
            shrink += std::max(-net, 0);
            int inside = 0;
            for (int p = gold[i].start; p < gold[j].end; ++p)
                inside += !covered[static_cast<std::size_t>(p)];
            if (std::min(grow, shrink) > inside) return false;
        }
    }
    return true;
}

// Random non-conflicting gold edits over src. With `safe` set, the whole
// set is re-checked after every addition so applying it always leaves every
// edit on a cost-optimal alignment.
std::vector<Edit> random_gold(Rng& rng, const Tokens& src, const Tokens& corr_pool,
                              int annotator, bool safe) {
    const int n = static_cast<int>(src.size());
    const int want = rng.below(4);
    std::vector<Edit> gold;
    for (int guard = 0; static_cast<int>(gold.size()) < want && guard < 60; ++guard) {
        int s = rng.below(n + 1);
        int e = s + rng.below(std::min(2, n - s) + 1);
        Tokens corr = pick_tokens(rng, corr_pool, rng.below(3));
        if (corr.empty() && s == e) continue;
        if (corr == Tokens(src.begin() + s, src.begin() + e)) continue;
        bool clash = false;
        for (const Edit& g : gold) clash = clash || spans_clash(g.start, g.end, s, e);
        if (clash) continue;
        gold.push_back(mk(s, e, std::move(corr), BaseLabel::WordChoice, annotator));
        if (safe && !anchors_hold(gold, n)) gold.pop_back();
    }
    return gold;
}

Tokens perturb(Rng& rng, Tokens base, const Tokens& pool) {
    const int extra = rng.below(3);
    for (int k = 0; k < extra; ++k) {
        int op = base.empty() ? 2 : rng.below(3);
        if (op == 0) {
            base[rng.below(static_cast<int>(base.size()))] =
                pool[rng.below(static_cast<int>(pool.size()))];
        } else if (op == 1) {
            base.erase(base.begin() + rng.below(static_cast<int>(base.size())));
        } else {
            base.insert(base.begin() + rng.below(static_cast<int>(base.size()) + 1),
                        pool[rng.below(static_cast<int>(pool.size()))]);
        }
    }
    return base;
}

std::string data_path(const char* name) {
    return std::string(GECW_TEST_DATA) + "/" + name;
}

// --------------------------------------------------------------------------
// 1. The f-beta arithmetic reproduces every published precision/recall/F row.

Check criterion1() {
    Check c;
    const struct {
        double p, r, f;
    } rows[] = {
        {0.7192, 0.5544, 0.6788}, {0.6617, 0.4204, 0.5936}, {0.5616, 0.4361, 0.5310},
        {0.7148, 0.5522, 0.6750}, {0.7144, 0.5521, 0.6747}, {0.7186, 0.5532, 0.6781},
        {0.6519, 0.4212, 0.5875}, {0.5694, 0.4506, 0.5409}, {0.7431, 0.4921, 0.6743},
        {0.5891, 0.0766, 0.2519}, {0.6150, 0.0629, 0.2232}, {0.6519, 0.0921, 0.2942},
        {0.6860, 0.0867, 0.2880}, {0.7500, 0.3920, 0.6340},
    };
    for (const auto& row : rows) {
        double got = f_beta_pr(row.p, row.r, 0.5);
        c.require(std::abs(got - row.f) <= 5e-4,
                  "P=" + format_fixed4(row.p) + " R=" + format_fixed4(row.r) + " gave F=" +
                      format_fixed4(got) + ", published " + format_fixed4(row.f));
    }
    return c;
}

// --------------------------------------------------------------------------
// 2. The lattice scorer agrees with exhaustive enumeration of every optimal
//    alignment and grouping, per annotator and through the corpus-level
//    running annotator selection.

Check criterion2() {
    Check c;
    Rng rng(4242);
    const Tokens pool = {"a", "b", "c", "d", "A"};
    Corpus corpus;
    std::vector<Tokens> hyps;
    for (int it = 0; it < 1000; ++it) {
        AnnotatedSentence sent;
        sent.source = pick_tokens(rng, pool, 1 + rng.below(8));
        const int nann = 1 + rng.below(2);
        for (int a = 0; a < nann; ++a) {
            sent.annotators.push_back(a);
            for (Edit& g : random_gold(rng, sent.source, pool, a, false))
                sent.edits.push_back(std::move(g));
        }
        std::vector<Edit> applied;
        for (const Edit& g : sent.edits_for(0))
            if (rng.below(2)) applied.push_back(g);
        hyps.push_back(perturb(rng, apply_edits(sent.source, applied), pool));
        corpus.push_back(std::move(sent));
    }

    Counts running;
    for (std::size_t i = 0; i < corpus.size() && c.ok; ++i) {
        const AnnotatedSentence& sent = corpus[i];
        double best_f = -1.0;
        Counts best;
        for (int a : sent.annotators) {
            std::vector<Edit> gold = sent.edits_for(a);
            oracle::Counts want = oracle::max_match(sent.source, hyps[i], gold, 4);
            AnnotatorScore got = score_hypothesis_edits(sent.source, hyps[i], gold, 4);
            c.require(got.tp == want.tp && got.fp == want.fp && got.fn == want.fn,
                      "sentence " + std::to_string(i) + " annotator " + std::to_string(a) +
                          " disagrees with the exhaustive oracle");
            double f = f_beta(running.tp + want.tp, running.fp + want.fp,
                              running.fn + want.fn, 0.5);
            if (f > best_f) {
                best_f = f;
                best = {want.tp, want.fp, want.fn};
            }
        }
        running.tp += best.tp;
        running.fp += best.fp;
        running.fn += best.fn;
    }

    ScoreReport rep = score_corpus(corpus, hyps);
    c.require(rep.tp == running.tp && rep.fp == running.fp && rep.fn == running.fn,
              "corpus totals diverge from the oracle-driven running selection");
    return c;
}

// --------------------------------------------------------------------------
// 3. Self-scoring identities: applying annotator 0's edits scores exactly
//    1.0 across the board; leaving the source untouched scores 1.0/0/0.

Check criterion3() {
    Check c;
    Corpus shipped = parse_m2(read_file(data_path("repro_gold.m2")));
    std::vector<Tokens> perfect, untouched;
    for (const AnnotatedSentence& sent : shipped) {
        perfect.push_back(apply_edits(sent.source, sent.edits_for(0)));
        untouched.push_back(sent.source);
    }
    ScoreReport self = score_corpus(shipped, perfect);
    c.require(self.fp == 0 && self.fn == 0 && self.precision() == 1.0 &&
                  self.recall() == 1.0 && self.f05() == 1.0,
              "perfect hypotheses do not score exactly 1.0 on the shipped corpus");
    ScoreReport none = score_corpus(shipped, untouched);
    c.require(none.tp == 0 && none.fp == 0 && none.precision() == 1.0 &&
                  none.recall() == 0.0 && none.f05() == 0.0,
              "unchanged hypotheses do not score 1.0/0/0 on the shipped corpus");

    Rng rng(555);
    const Tokens src_pool = {"a", "b", "c", "d", "e", "f", "g", "h"};
    const Tokens corr_pool = {"x", "y", "z"};
    for (int trial = 0; trial < 50 && c.ok; ++trial) {
        Corpus gold;
        std::vector<Tokens> applied, same;
        long long total = 0;
        for (int sidx = 0; sidx < 10; ++sidx) {
            AnnotatedSentence sent;
            Tokens shuffled = src_pool;
            for (int k = static_cast<int>(shuffled.size()) - 1; k > 0; --k)
                std::swap(shuffled[k], shuffled[rng.below(k + 1)]);
            shuffled.resize(1 + rng.below(8));
            sent.source = shuffled;
            sent.annotators = {0};
            sent.edits = random_gold(rng, sent.source, corr_pool, 0, true);
            total += static_cast<long long>(sent.edits.size());
            applied.push_back(apply_edits(sent.source, sent.edits));
            same.push_back(sent.source);
            gold.push_back(std::move(sent));
        }
        ScoreReport p = score_corpus(gold, applied);
        c.require(p.tp == total && p.fp == 0 && p.fn == 0 && p.precision() == 1.0 &&
                      p.recall() == 1.0 && p.f05() == 1.0,
                  "perfect hypotheses missed 1.0 on randomized corpus " + std::to_string(trial));
        ScoreReport u = score_corpus(gold, same);
        c.require(u.tp == 0 && u.fp == 0 && u.fn == total && u.precision() == 1.0,
                  "unchanged hypotheses counted edits on randomized corpus " +
                      std::to_string(trial));
        if (total > 0)
            c.require(u.recall() == 0.0 && u.f05() == 0.0,
                      "unchanged hypotheses scored nonzero recall on corpus " +
                          std::to_string(trial));
    }
    return c;
}

// --------------------------------------------------------------------------
// 4. Word-order rule: order kept, nested form fixed -> nested edit is a TP,
//    the word-order edit a FN, and the per-label recall table reflects it.

Check criterion4() {
    Check c;
    AnnotatedSentence sent;
    sent.source = {"kooli", "ma", "lähen"};
    sent.annotators = {0};
    sent.edits.push_back(mk(0, 3, {"ma", "läksin", "kooli"}, BaseLabel::WordOrder));
    sent.edits.push_back(mk(2, 3, {"läksin"}, BaseLabel::VerbForm));
    ScoreReport rep = score_corpus({sent}, {{"kooli", "ma", "läksin"}});
    c.require(rep.tp == 1 && rep.fp == 0 && rep.fn == 1,
              "expected tp=1 fp=0 fn=1, got tp=" + std::to_string(rep.tp) + " fp=" +
                  std::to_string(rep.fp) + " fn=" + std::to_string(rep.fn));
    c.require(rep.by_type.count("R:VERB-FORM") && rep.by_type.at("R:VERB-FORM").tp == 1 &&
                  rep.by_type.at("R:VERB-FORM").fn == 0,
              "nested verb-form edit did not earn its TP");
    c.require(rep.by_type.count("R:WO") && rep.by_type.at("R:WO").tp == 0 &&
                  rep.by_type.at("R:WO").fn == 1,
              "unresolved word-order edit did not count as FN");
    std::string report = format_report(rep);
    c.require(report.find("recall[R:VERB-FORM]=1.0000\n") != std::string::npos,
              "per-label recall line for R:VERB-FORM is wrong");
    c.require(report.find("recall[R:WO]=0.0000\n") != std::string::npos,
              "per-label recall line for R:WO is wrong");
    return c;
}

// --------------------------------------------------------------------------
// 5. Synthetic noise is invertible sentence by sentence and the empirical
//    per-op frequencies track the profile rates within 10% relative.

Check criterion5() {
    Check c;
    auto draw_rate = [](std::uint64_t stream, double lo, double hi) {
        CounterRng rng(99, stream);
        return lo + rng.next_double() * (hi - lo);
    };
    NoiseProfile profile;
    profile.word_delete = draw_rate(0, 0.08, 0.16);
    profile.word_insert = draw_rate(1, 0.08, 0.16);
    profile.word_transpose = draw_rate(2, 0.08, 0.16);
    profile.punct_delete = draw_rate(3, 0.15, 0.25);
    profile.char_delete = draw_rate(4, 0.02, 0.05);
    profile.char_insert = draw_rate(5, 0.02, 0.05);
    profile.char_transpose = draw_rate(6, 0.02, 0.05);
    profile.word_unigrams = {{"ja", 5}, {"ka", 3}, {"ning", 2}};
    profile.char_alphabet = {{"a", 3}, {"e", 2}, {"i", 1}, {"s", 1}};

    const std::vector<std::string> pool = {
        "maja",  "kooli", "lapsed", "linnas", "metsa",  "jõe",  "mere", "tuule",
        "lumi",  "päike", "raamat", "laud",   "tool",   "aken", "uks",  "sein",
        "katus", "aed",   "tee",    "auto",   "rong",   "buss", "laev", "lennuk"};
    std::mt19937 gen(2026);
    std::vector<Tokens> clean;
    for (int i = 0; i < 10000; ++i) {
        const int len = 5 + static_cast<int>(gen() % 8u);
        Tokens t;
        for (int k = 0; k < len; ++k) {
            std::string w = pool[gen() % pool.size()];
            while (!t.empty() && w == t.back()) w = pool[gen() % pool.size()];
            t.push_back(std::move(w));
        }
        if (len >= 8) t.insert(t.begin() + 4, ",");
        t.push_back(".");
        clean.push_back(std::move(t));
    }

    SynthStats stats;
    std::vector<SynthRecord> records = synthesize(clean, profile, 424242, 1.0, &stats);
    c.require(records.size() == clean.size(), "record count mismatch");
    for (std::size_t i = 0; i < records.size() && c.ok; ++i) {
        c.require(records[i].seed == i, "record seed mismatch at " + std::to_string(i));
        c.require(apply_edits(records[i].noised, records[i].gold_edits) == clean[i],
                  "gold edits do not restore sentence " + std::to_string(i));
    }

    auto tracks = [&c](std::uint64_t trials, std::uint64_t hits, double rate,
                       const char* name) {
        c.require(trials > 0, std::string(name) + " never got a trial");
        if (trials == 0) return;
        const double freq = static_cast<double>(hits) / static_cast<double>(trials);
        c.require(std::abs(freq - rate) <= 0.1 * rate,
                  std::string(name) + " frequency " + format_fixed4(freq) +
                      " strays from rate " + format_fixed4(rate));
    };
    tracks(stats.word_delete_trials, stats.word_delete_hits, profile.word_delete,
           "word_delete");
    tracks(stats.word_insert_trials, stats.word_insert_hits, profile.word_insert,
           "word_insert");
    tracks(stats.word_transpose_trials, stats.word_transpose_hits, profile.word_transpose,
           "word_transpose");
    tracks(stats.punct_delete_trials, stats.punct_delete_hits, profile.punct_delete,
           "punct_delete");
    tracks(stats.char_delete_trials, stats.char_delete_hits, profile.char_delete,
           "char_delete");
    tracks(stats.char_insert_trials, stats.char_insert_hits, profile.char_insert,
           "char_insert");
    tracks(stats.char_transpose_trials, stats.char_transpose_hits, profile.char_transpose,
           "char_transpose");
    return c;
}

// --------------------------------------------------------------------------
// 6. The spell corrector restores planted distance-1 typos without touching
//    clean tokens, and the delete-index candidate search matches the
//    brute-force oracle over the whole vocabulary.

Check criterion6() {
    Check c;
    const std::string letters = "abdeghiklmnoprstuv";
    std::mt19937 gen(77);
    std::vector<std::string> kept, extra;
    std::set<std::string> seen;
    for (int guard = 0;
         (kept.size() < 80 || extra.size() < 420) && guard < 40000; ++guard) {
        const int len = 5 + static_cast<int>(gen() % 3u);
        std::string w;
        for (int i = 0; i < len; ++i) w += letters[gen() % letters.size()];
        if (!seen.insert(w).second) continue;
        bool far = true;
        for (const std::string& k : kept) {
            if (oracle::osa(w, k) < 3) {
                far = false;
                break;
            }
        }
        if (far && kept.size() < 80)
            kept.push_back(w);
        else if (extra.size() < 420)
            extra.push_back(w);
    }
    c.require(kept.size() == 80, "vocabulary construction fell short");
    if (kept.size() != 80) return c;

    std::mt19937 sgen(78);
    std::vector<Tokens> clean;
    for (int i = 0; i < 200; ++i) {
        const int len = 10 + static_cast<int>(sgen() % 5u);
        Tokens t;
        for (int k = 0; k < len; ++k) t.push_back(kept[sgen() % kept.size()]);
        t.push_back(".");
        clean.push_back(std::move(t));
    }
    NgramLm lm = NgramLm::train(clean, 3);

    // Light noise: scattered typos are the regime a per-token corrector is
    // built for, and adjacent corrupted tokens would starve each other of
    // trigram evidence.
    NoiseProfile profile;
    profile.char_delete = 0.002;
    profile.char_insert = 0.002;
    profile.char_transpose = 0.002;
    for (char ch : letters) profile.char_alphabet[std::string(1, ch)] = 1;

    std::vector<SynthRecord> records = synthesize(clean, profile, 515151);
    CandidateIndex index(kept);
    int planted = 0, restored = 0;
    bool clean_untouched = true;
    std::set<std::string> typo_tokens;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const Tokens& noised = records[i].noised;
        c.require(noised.size() == clean[i].size(), "char-only noise moved token positions");
        if (noised.size() != clean[i].size()) return c;
        Tokens out = correct_sentence(noised, lm, index).tokens;
        for (std::size_t t = 0; t < noised.size(); ++t) {
            if (noised[t] == clean[i][t]) {
                clean_untouched = clean_untouched && out[t] == noised[t];
            } else if (oracle::osa(noised[t], clean[i][t]) == 1) {
                ++planted;
                restored += out[t] == clean[i][t] ? 1 : 0;
                typo_tokens.insert(noised[t]);
            }
        }
    }
    c.require(planted >= 50, "only " + std::to_string(planted) + " distance-1 typos planted");
    c.require(clean_untouched, "a clean token was rewritten");
    c.require(10 * restored >= 9 * planted, "recall below 0.9: restored " +
                                                std::to_string(restored) + " of " +
                                                std::to_string(planted));

    std::vector<std::string> vocab = kept;
    for (const std::string& w : extra) {
        if (vocab.size() >= 500) break;
        vocab.push_back(w);
    }
    c.require(vocab.size() == 500, "extended vocabulary fell short");
    CandidateIndex big(vocab);
    std::vector<std::string> queries = vocab;
    std::mt19937 qgen(79);
    for (int i = 0; i < 150; ++i) {
        const std::string& base = vocab[qgen() % vocab.size()];
        std::string del = base;
        del.erase(qgen() % del.size(), 1);
        std::string ins = base;
        ins.insert(ins.begin() + qgen() % (ins.size() + 1), letters[qgen() % letters.size()]);
        std::string sub = base;
        sub[qgen() % sub.size()] = letters[qgen() % letters.size()];
        queries.push_back(del);
        queries.push_back(ins);
        queries.push_back(sub);
    }
    for (int i = 0; i < 60; ++i) {
        const int len = 3 + static_cast<int>(qgen() % 7u);
        std::string w;
        for (int k = 0; k < len; ++k) w += letters[qgen() % letters.size()];
        queries.push_back(w);
    }
    queries.insert(queries.end(), typo_tokens.begin(), typo_tokens.end());
    for (const std::string& q : queries) {
        for (int d = 0; d <= 2 && c.ok; ++d) {
            auto got = big.candidates(q, d);
            auto want = oracle::candidates(vocab, q, d);
            bool same = got.size() == want.size();
            for (std::size_t k = 0; same && k < got.size(); ++k)
                same = got[k].id == want[k].id && got[k].word == want[k].word &&
                       got[k].distance == want[k].distance;
            c.require(same, "candidate search disagrees with the oracle on '" + q + "'");
        }
        if (!c.ok) break;
    }
    return c;
}

// --------------------------------------------------------------------------
// 7. LM distributions sum to one over the full id space and serialization
//    round-trips bit for bit, in memory and through a file.

Check criterion7() {
    Check c;
    const std::vector<std::string> pool = {"ta",   "on",      "hea",   "maja",
                                           "suur", "väike",   "koer",  "kass",
                                           "sööb", "jookseb", "magab", "seal"};
    std::mt19937 gen(81);
    std::vector<Tokens> corpus;
    for (int i = 0; i < 60; ++i) {
        const int len = 3 + static_cast<int>(gen() % 5u);
        Tokens t;
        for (int k = 0; k < len; ++k) t.push_back(pool[gen() % pool.size()]);
        corpus.push_back(std::move(t));
    }
    NgramLm lm = NgramLm::train(corpus, 3);

    std::mt19937 cgen(82);
    for (int it = 0; it < 100 && c.ok; ++it) {
        NgramLm::IdTuple ctx = {
            static_cast<NgramLm::Id>(cgen() % lm.vocab_size()),
            static_cast<NgramLm::Id>(cgen() % lm.vocab_size()),
        };
        double sum = 0.0;
        for (NgramLm::Id w = 0; w < lm.vocab_size(); ++w) sum += lm.prob_id(ctx, w);
        c.require(std::abs(sum - 1.0) <= 1e-6,
                  "context " + std::to_string(it) + " sums to " + std::to_string(sum));
    }

    const std::string blob = lm.save();
    c.require(NgramLm::load(blob).save() == blob, "in-memory round trip changed bytes");
    const std::string path =
        (std::filesystem::temp_directory_path() / "gecw_acceptance_lm.bin").string();
    lm.save_file(path);
    NgramLm from_file = NgramLm::load_file(path);
    std::filesystem::remove(path);
    c.require(from_file.save() == blob, "file round trip changed bytes");
    return c;
}

// --------------------------------------------------------------------------
// 8. POS context detector: a context seen in 3% of its trigram's occurrences
//    is flagged at threshold 0.05, not at 0.01, and flag sets grow
//    monotonically with the threshold.

Check criterion8() {
    Check c;
    auto tagged = [](std::vector<std::string> pos) {
        TaggedSentence s;
        for (std::size_t i = 0; i < pos.size(); ++i) s.tokens.push_back("w" + std::to_string(i));
        s.pos = std::move(pos);
        return s;
    };
    std::vector<TaggedSentence> train;
    for (int i = 0; i < 97; ++i) train.push_back(tagged({"N", "V", "N"}));
    for (int i = 0; i < 3; ++i) train.push_back(tagged({"X", "N", "V", "N"}));
    for (int i = 0; i < 20; ++i) train.push_back(tagged({"X", "N", "V"}));
    PosContextModel model = PosContextModel::train(train);

    std::vector<FlaggedSpan> at05 = model.detect({"X", "N", "V", "N"}, 0.05);
    c.require(at05.size() == 1, "expected exactly one flag at threshold 0.05, got " +
                                    std::to_string(at05.size()));
    if (at05.size() == 1) {
        c.require(at05[0].start == 1 && at05[0].end == 4, "flag covers the wrong span");
        c.require(at05[0].reason == FlaggedSpan::Reason::RareContext, "flag reason is wrong");
        c.require(at05[0].probability == 0.03,
                  "flag probability " + format_fixed4(at05[0].probability) + ", expected 0.0300");
    }
    c.require(model.detect({"X", "N", "V", "N"}, 0.01).empty(),
              "the 3% context must not fire at threshold 0.01");

    const std::vector<std::vector<std::string>> inputs = {
        {"X", "N", "V", "N"},
        {"N", "V", "N"},
        {"X", "N", "V"},
        {"N", "N", "N"},
        {"X", "N", "V", "N", "V", "N"},
    };
    for (const auto& tags : inputs) {
        std::set<std::tuple<int, int, int>> prev;
        for (double t : {0.01, 0.05, 0.1}) {
            std::set<std::tuple<int, int, int>> cur;
            for (const FlaggedSpan& f : model.detect(tags, t))
                cur.insert({f.start, f.end, static_cast<int>(f.reason)});
            c.require(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()),
                      "flag set shrank when the threshold grew");
            prev = std::move(cur);
        }
    }
    return c;
}

// --------------------------------------------------------------------------
// 9. The scorer re-scores the shipped gold/hypothesis pair to the published
//    report byte for byte, and the reproduction guide ships with the repo.

Check criterion9() {
    Check c;
    Corpus gold = parse_m2(read_file(data_path("repro_gold.m2")));
    std::vector<Tokens> hyp = parse_plain(read_file(data_path("repro_hyp.txt")));
    ScoreReport rep = score_corpus(gold, hyp);
    const std::string want = read_file(data_path("repro_report.txt"));
    c.require(format_report(rep) == want,
              "re-scored report differs from the published bytes");
    const std::string doc = read_file(GECW_REPRO_DOC);
    c.require(doc.find("gecw score") != std::string::npos,
              "reproduction guide is missing its scoring walkthrough");
    return c;
}

}  // namespace

int main() {
    struct Item {
        int id;
        const char* what;
        Check (*run)();
    };
    const Item items[] = {
        {1, "published evaluation rows reproduced by the f-beta arithmetic", criterion1},
        {2, "lattice scorer matches exhaustive alignment enumeration", criterion2},
        {3, "self-scoring identities hold for perfect and unchanged hypotheses", criterion3},
        {4, "word-order fixture keeps nested credit and counts the reorder as missed",
         criterion4},
        {5, "synthesized noise inverts exactly and op frequencies track the profile",
         criterion5},
        {6, "spell corrector restores planted typos and matches the candidate oracle",
         criterion6},
        {7, "language model sums to one and serialization round-trips bit for bit",
         criterion7},
        {8, "detector flags the rare context at 0.05 only and stays threshold-monotone",
         criterion8},
        {9, "shipped gold/hypothesis pair re-scores to the published report", criterion9},
    };
    int failed = 0;
    for (const Item& item : items) {
        Check c;
        try {
            c = item.run();
        } catch (const std::exception& e) {
            c.ok = false;
            c.why = std::string("unexpected exception: ") + e.what();
        }
        std::string line = "criterion " + std::to_string(item.id) + ": " +
                           (c.ok ? "pass" : "FAIL") + " - " + item.what;
        if (!c.ok) line += " (" + c.why + ")";
        std::puts(line.c_str());
        failed += c.ok ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
