#pragma once

// Word-order anomaly detection over POS sequences.
//
// Training counts every POS trigram together with its surrounding context
// (previous tag, trigram, next tag), padding sentence edges with <s>/</s>.
// At detection time a trigram window is suspicious when its context is rare:
// p = count(prev, trigram, next) / count(trigram) falls below the threshold
// while the trigram itself is well attested (at least min_support), or the
// trigram is too rare to judge at all. A joint mode divides by the total
// window count instead of the trigram count. Flags carry the token span
// [start, start+3) and are reported as TSV, one sentence per input line.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "gecw/conllu.hpp"
#include "gecw/corpus.hpp"
#include "gecw/scorer.hpp"
#include "gecw/util.hpp"

namespace gecw {

inline constexpr std::string_view kBosTag = "<s>";
inline constexpr std::string_view kEosTag = "</s>";

struct FlaggedSpan {
    int start = 0, end = 0;
    double probability = 0.0;
    enum class Reason { RareContext, UnseenTrigram } reason = Reason::RareContext;
};

inline std::string_view to_string(FlaggedSpan::Reason r) {
    return r == FlaggedSpan::Reason::RareContext ? "rare-context" : "unseen-trigram";
}

// Never-flag list of full (prev, t1, t2, t3, next) contexts, one per line as
// five tab-separated tags; <s> and </s> name the sentence edges.
class ContextAllowlist {
public:
    ContextAllowlist() = default;

    static ContextAllowlist parse(std::string_view text) {
        ContextAllowlist a;
        std::size_t lineno = 0;
        for (std::string& line : split_on(text, '\n')) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '#') continue;
            auto cols = split_on(line, '\t');
            if (cols.size() != 5)
                throw ParseError("allowlist lines are five tab-separated tags", lineno);
            for (const std::string& c : cols)
                if (c.empty()) throw ParseError("empty tag in allowlist", lineno);
            a.entries_.insert(cols);
        }
        return a;
    }

    static ContextAllowlist load_file(const std::string& path) { return parse(read_file(path)); }

    bool contains(const std::vector<std::string>& context) const {
        return entries_.count(context) != 0;
    }

    std::size_t size() const noexcept { return entries_.size(); }

private:
    std::set<std::vector<std::string>> entries_;
};

class PosContextModel {
public:
    std::uint64_t min_support = 10;

    PosContextModel() = default;

    static PosContextModel train(const std::vector<TaggedSentence>& sentences) {
        if (sentences.empty())
            throw ValidationError("training needs at least one tagged sentence");
        PosContextModel m;
        for (const TaggedSentence& s : sentences) {
            check_tags(s.pos);
            const auto& tags = s.pos;
            const int n = static_cast<int>(tags.size());
            for (int i = 0; i + 3 <= n; ++i) {
                std::vector<std::string> tri(tags.begin() + i, tags.begin() + i + 3);
                ++m.tri_[tri];
                ++m.ctx_[context_at(tags, i)];
                ++m.windows_;
            }
        }
        return m;
    }

    std::uint64_t windows() const noexcept { return windows_; }

    std::uint64_t trigram_count(const std::vector<std::string>& tri) const {
        auto it = tri_.find(tri);
        return it == tri_.end() ? 0 : it->second;
    }

    std::uint64_t context_count(const std::vector<std::string>& ctx) const {
        auto it = ctx_.find(ctx);
        return it == ctx_.end() ? 0 : it->second;
    }

    std::vector<FlaggedSpan> detect(const std::vector<std::string>& tags,
                                    double threshold = 0.05, bool joint = false,
                                    const ContextAllowlist* allow = nullptr) const {
        std::vector<FlaggedSpan> flags;
        const int n = static_cast<int>(tags.size());
        for (int i = 0; i + 3 <= n; ++i) {
            std::vector<std::string> ctx = context_at(tags, i);
            if (allow && allow->contains(ctx)) continue;
            std::vector<std::string> tri(ctx.begin() + 1, ctx.begin() + 4);
            std::uint64_t tri_count = trigram_count(tri);
            std::uint64_t ctx_count = context_count(ctx);

            FlaggedSpan flag;
            flag.start = i;
            flag.end = i + 3;
            if (tri_count < min_support) {
                flag.probability =
                    tri_count ? static_cast<double>(ctx_count) / static_cast<double>(tri_count)
                              : 0.0;
                flag.reason = FlaggedSpan::Reason::UnseenTrigram;
                flags.push_back(flag);
                continue;
            }
            double denom = joint ? static_cast<double>(windows_)
                                 : static_cast<double>(tri_count);
            double p = denom > 0 ? static_cast<double>(ctx_count) / denom : 0.0;
            if (p < threshold) {
                flag.probability = p;
                flag.reason = FlaggedSpan::Reason::RareContext;
                flags.push_back(flag);
            }
        }
        return flags;
    }

    std::string serialize() const {
        std::string out = "POSCTX 1\n";
        out += "minsupport\t" + std::to_string(min_support) + "\n";
        for (const auto& [tri, count] : tri_) {
            out += "tri";
            for (const std::string& t : tri) out += "\t" + t;
            out += "\t" + std::to_string(count) + "\n";
        }
        for (const auto& [ctx, count] : ctx_) {
            out += "ctx";
            for (const std::string& t : ctx) out += "\t" + t;
            out += "\t" + std::to_string(count) + "\n";
        }
        return out;
    }

    static PosContextModel parse(std::string_view text) {
        PosContextModel m;
        auto lines = split_on(text, '\n');
        if (lines.empty() || lines[0] != "POSCTX 1")
            throw ParseError("not a POS context model file", 1);
        for (std::size_t ln = 1; ln < lines.size(); ++ln) {
            std::string& line = lines[ln];
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            auto cols = split_on(line, '\t');
            std::uint64_t count = 0;
            if (cols.size() < 2 || !detail::parse_int_u64(cols.back(), count))
                throw ParseError("bad count", ln + 1);
            if (cols[0] == "minsupport" && cols.size() == 2) {
                m.min_support = count;
                continue;
            }
            if (count == 0) throw ParseError("bad count", ln + 1);
            std::vector<std::string> key(cols.begin() + 1, cols.end() - 1);
            for (const std::string& t : key)
                if (t.empty()) throw ParseError("empty tag", ln + 1);
            if (cols[0] == "tri" && key.size() == 3) {
                m.tri_[key] += count;
            } else if (cols[0] == "ctx" && key.size() == 5) {
                m.ctx_[key] += count;
                m.windows_ += count;
            } else {
                throw ParseError("unrecognized model line", ln + 1);
            }
        }
        for (const auto& [ctx, count] : m.ctx_) {
            std::vector<std::string> tri(ctx.begin() + 1, ctx.begin() + 4);
            if (m.trigram_count(tri) < count)
                throw ValidationError("context exceeds its trigram count: " + join_tokens(ctx));
        }
        return m;
    }

    static PosContextModel load_file(const std::string& path) { return parse(read_file(path)); }
    void save_file(const std::string& path) const { write_file(path, serialize()); }

private:
    static std::vector<std::string> context_at(const std::vector<std::string>& tags, int i) {
        const int n = static_cast<int>(tags.size());
        std::vector<std::string> ctx;
        ctx.reserve(5);
        ctx.push_back(i > 0 ? tags[i - 1] : std::string(kBosTag));
        ctx.insert(ctx.end(), tags.begin() + i, tags.begin() + i + 3);
        ctx.push_back(i + 3 < n ? tags[i + 3] : std::string(kEosTag));
        return ctx;
    }

    static void check_tags(const std::vector<std::string>& tags) {
        for (const std::string& t : tags) {
            if (t.empty() || t.find('\t') != std::string::npos ||
                t.find(' ') != std::string::npos || t == kBosTag || t == kEosTag)
                throw ValidationError("bad POS tag '" + t + "'");
        }
    }

    std::map<std::vector<std::string>, std::uint64_t> tri_;
    std::map<std::vector<std::string>, std::uint64_t> ctx_;
    std::uint64_t windows_ = 0;
};

inline PosContextModel train_pos_model(const std::vector<TaggedSentence>& tagged) {
    return PosContextModel::train(tagged);
}

inline std::vector<FlaggedSpan> detect(const PosContextModel& model, const TaggedSentence& sentence,
                                       double threshold = 0.05, bool joint = false,
                                       const ContextAllowlist* allow = nullptr) {
    return model.detect(sentence.pos, threshold, joint, allow);
}

inline std::vector<std::vector<FlaggedSpan>> detect_corpus(
    const PosContextModel& model, const std::vector<TaggedSentence>& sentences,
    double threshold = 0.05, bool joint = false, const ContextAllowlist* allow = nullptr) {
    std::vector<std::vector<FlaggedSpan>> out;
    out.reserve(sentences.size());
    for (const TaggedSentence& s : sentences)
        out.push_back(model.detect(s.pos, threshold, joint, allow));
    return out;
}

inline std::string serialize_flags(const std::vector<std::vector<FlaggedSpan>>& per_sentence) {
    std::string out;
    for (std::size_t s = 0; s < per_sentence.size(); ++s) {
        for (const FlaggedSpan& f : per_sentence[s]) {
            out += std::to_string(s) + "\t" + std::to_string(f.start) + "\t" +
                   std::to_string(f.end) + "\t" + format_fixed4(f.probability) + "\t" +
                   std::string(to_string(f.reason)) + "\n";
        }
    }
    return out;
}

// Detector quality against gold annotation by span overlap. Per sentence the
// annotator whose edit spans overlap the most flags wins (ties to the lowest
// id); a flag overlapping any of that annotator's edits is a true positive,
// and each of the annotator's edits counts as recalled when some flag touches
// it. Precision is over flags, recall over gold edits.
struct DetectorScore {
    long long flag_tp = 0, flag_fp = 0;
    long long gold_recalled = 0, gold_total = 0;

    double precision() const { return precision_value(flag_tp, flag_fp); }
    double recall() const { return recall_value(gold_recalled, gold_total - gold_recalled); }
    double f05() const { return f_beta_pr(precision(), recall(), 0.5); }
};

inline DetectorScore evaluate_detector(const std::vector<std::vector<FlaggedSpan>>& flags,
                                       const Corpus& gold) {
    if (flags.size() != gold.size())
        throw ValidationError("flags and gold must have one entry per sentence");
    DetectorScore score;
    for (std::size_t s = 0; s < gold.size(); ++s) {
        const auto& sentence_flags = flags[s];
        std::set<int> ids(gold[s].annotators.begin(), gold[s].annotators.end());
        if (ids.empty()) ids.insert(0);

        long long best_tp = -1;
        std::vector<Edit> best_edits;
        for (int id : ids) {
            std::vector<Edit> edits;
            for (const Edit& e : gold[s].edits)
                if (e.annotator == id && !e.label.is_noop()) edits.push_back(e);
            long long tp = 0;
            for (const FlaggedSpan& f : sentence_flags) {
                for (const Edit& e : edits) {
                    if (detection_overlap(f.start, f.end, e.start, e.end)) {
                        ++tp;
                        break;
                    }
                }
            }
            if (tp > best_tp) {
                best_tp = tp;
                best_edits = std::move(edits);
            }
        }

        score.flag_tp += best_tp;
        score.flag_fp += static_cast<long long>(sentence_flags.size()) - best_tp;
        score.gold_total += static_cast<long long>(best_edits.size());
        for (const Edit& e : best_edits) {
            for (const FlaggedSpan& f : sentence_flags) {
                if (detection_overlap(f.start, f.end, e.start, e.end)) {
                    ++score.gold_recalled;
                    break;
                }
            }
        }
    }
    return score;
}

}  // namespace gecw
