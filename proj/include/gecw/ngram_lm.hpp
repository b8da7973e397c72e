#pragma once

// Interpolated additively smoothed n-gram language model.
//
// Every sentence is padded with order-1 BOS markers and one EOS; all
// sub-order windows are counted over that one padded sequence, so each
// (n+1)-gram count is bounded by its n-gram prefix count. Denominator
// tables are the marginals of the numerators (rebuilt after load), so
// every conditional (c + delta) / (total + delta * |V|) sums to exactly 1
// over the vocabulary. The interpolation weights default to (0.1, 0.3, 0.6)
// for a trigram model and to uniform for other orders.
//
// Binary model files: magic "ETLM", u32 version, u8 order, the weights as
// raw doubles, the vocabulary, one sorted run of (id tuple, u64 count) per
// order, then an FNV-1a checksum of everything before it. Little-endian.

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gecw/util.hpp"

namespace gecw {

namespace detail {

inline void put_u8(std::string& out, std::uint8_t v) { out.push_back(static_cast<char>(v)); }

inline void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

inline void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

inline void put_f64(std::string& out, double v) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    __builtin_memcpy(&bits, &v, sizeof(bits));
    put_u64(out, bits);
}

class ByteReader {
public:
    explicit ByteReader(std::string_view data) : data_(data) {}

    std::uint8_t u8() { return raw(1)[0]; }

    std::uint32_t u32() {
        auto p = raw(4);
        std::uint32_t v = 0;
        for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
        return v;
    }

    std::uint64_t u64() {
        auto p = raw(8);
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
        return v;
    }

    double f64() {
        std::uint64_t bits = u64();
        double v;
        __builtin_memcpy(&v, &bits, sizeof(v));
        return v;
    }

    std::string bytes(std::size_t n) {
        auto p = raw(n);
        return std::string(reinterpret_cast<const char*>(p), n);
    }

    std::size_t offset() const noexcept { return pos_; }
    std::size_t remaining() const noexcept { return data_.size() - pos_; }

private:
    const unsigned char* raw(std::size_t n) {
        if (pos_ + n > data_.size()) throw ParseError("model file truncated");
        const auto* p = reinterpret_cast<const unsigned char*>(data_.data()) + pos_;
        pos_ += n;
        return p;
    }

    std::string_view data_;
    std::size_t pos_ = 0;
};

}  // namespace detail

class NgramLm {
public:
    using Id = std::uint32_t;
    using IdTuple = std::vector<Id>;

    static constexpr Id kUnk = 0;
    static constexpr Id kBos = 1;
    static constexpr Id kEos = 2;
    static constexpr double kDelta = 0.01;

    NgramLm() = default;

    static NgramLm train(const std::vector<Tokens>& sentences, int order = 3,
                         std::vector<double> lambdas = {}, bool map_hapax = false) {
        if (order < 1 || order > 5) throw ValidationError("model order must be in [1, 5]");
        bool any_nonempty = false;
        for (const Tokens& s : sentences)
            if (!s.empty()) { any_nonempty = true; break; }
        if (!any_nonempty) throw ValidationError("training needs at least one non-empty sentence");
        NgramLm lm;
        lm.order_ = order;
        lm.lambdas_ = lambdas.empty() ? default_lambdas(order) : std::move(lambdas);
        check_lambdas(lm.lambdas_, order);

        std::map<std::string, std::uint64_t> freq;
        for (const Tokens& s : sentences)
            for (const std::string& t : s) ++freq[t];
        std::map<std::string, Id> seen;
        for (const auto& [tok, n] : freq)
            if (!map_hapax || n > 1) seen.emplace(tok, 0);
        lm.tokens_.reserve(seen.size());
        for (auto& [tok, id] : seen) {
            id = static_cast<Id>(lm.tokens_.size() + kFirstRealId);
            lm.tokens_.push_back(tok);
        }
        lm.index_ = std::move(seen);

        lm.numer_.assign(order + 1, {});
        for (const Tokens& s : sentences) {
            std::vector<Id> padded;
            padded.reserve(s.size() + order);
            padded.insert(padded.end(), order - 1, kBos);
            for (const std::string& t : s) padded.push_back(lm.token_id(t));
            padded.push_back(kEos);
            for (int k = 1; k <= order; ++k)
                for (std::size_t t = k - 1; t < padded.size(); ++t) {
                    IdTuple gram(padded.begin() + (t - (k - 1)), padded.begin() + t + 1);
                    ++lm.numer_[k][std::move(gram)];
                }
        }
        lm.rebuild_denominators();
        return lm;
    }

    int order() const noexcept { return order_; }
    const std::vector<double>& lambdas() const noexcept { return lambdas_; }
    std::size_t vocab_size() const noexcept { return tokens_.size() + kFirstRealId; }
    const std::vector<std::string>& vocab_tokens() const noexcept { return tokens_; }

    std::size_t ngram_count(int k) const {
        if (k < 1 || k > order_) throw ValidationError("no such n-gram order");
        return numer_[k].size();
    }

    std::uint64_t count(const IdTuple& gram) const {
        int k = static_cast<int>(gram.size());
        if (k < 1 || k > order_) throw ValidationError("no such n-gram order");
        auto it = numer_[k].find(gram);
        return it == numer_[k].end() ? 0 : it->second;
    }

    std::uint64_t total_tokens() const {
        std::uint64_t sum = 0;
        for (const auto& [gram, c] : numer_[1]) sum += c;
        return sum;
    }

    Id token_id(std::string_view tok) const {
        auto it = index_.find(std::string(tok));
        return it == index_.end() ? kUnk : it->second;
    }

    bool contains(std::string_view tok) const {
        return index_.find(std::string(tok)) != index_.end();
    }

    // Interpolated P(word | context) with the context taken as ids, most
    // recent last, already truncated/padded to order-1 entries by callers
    // that use it directly.
    double prob_id(const IdTuple& context, Id word) const {
        IdTuple ctx = normalize_context(context);
        double p = 0.0;
        const double v = static_cast<double>(vocab_size());
        for (int k = 1; k <= order_; ++k) {
            IdTuple gram(ctx.end() - (k - 1), ctx.end());
            gram.push_back(word);
            double numer = kDelta, denom = kDelta * v;
            if (auto it = numer_[k].find(gram); it != numer_[k].end())
                numer += static_cast<double>(it->second);
            IdTuple gctx(gram.begin(), gram.end() - 1);
            if (auto it = denom_[k].find(gctx); it != denom_[k].end())
                denom += static_cast<double>(it->second);
            p += lambdas_[k - 1] * (numer / denom);
        }
        return p;
    }

    double prob(const Tokens& context, const std::string& word) const {
        IdTuple ctx;
        ctx.reserve(context.size());
        for (const std::string& t : context) ctx.push_back(token_id(t));
        return prob_id(ctx, token_id(word));
    }

    // ln P(sentence) including the closing EOS; unknown tokens score as UNK.
    double sentence_logprob(const Tokens& sentence) const {
        std::vector<Id> ids;
        ids.reserve(sentence.size() + 1);
        for (const std::string& t : sentence) ids.push_back(token_id(t));
        ids.push_back(kEos);
        double lp = 0.0;
        IdTuple ctx(order_ - 1, kBos);
        for (Id w : ids) {
            lp += std::log(prob_id(ctx, w));
            if (order_ > 1) {
                ctx.erase(ctx.begin());
                ctx.push_back(w);
            }
        }
        return lp;
    }

    std::string save() const {
        std::string out = "ETLM";
        detail::put_u32(out, kVersion);
        detail::put_u8(out, static_cast<std::uint8_t>(order_));
        for (double l : lambdas_) detail::put_f64(out, l);
        detail::put_u32(out, static_cast<std::uint32_t>(tokens_.size()));
        for (const std::string& t : tokens_) {
            detail::put_u32(out, static_cast<std::uint32_t>(t.size()));
            out += t;
        }
        for (int k = 1; k <= order_; ++k) {
            detail::put_u64(out, numer_[k].size());
            for (const auto& [gram, count] : numer_[k]) {
                for (Id id : gram) detail::put_u32(out, id);
                detail::put_u64(out, count);
            }
        }
        detail::put_u64(out, fnv1a64(out.data(), out.size()));
        return out;
    }

    void save_file(const std::string& path) const { write_file(path, save()); }

    static NgramLm load(std::string_view data) {
        if (data.size() < 8 + 9) throw ParseError("model file truncated");
        std::uint64_t stored = 0;
        for (int i = 7; i >= 0; --i)
            stored = (stored << 8) |
                     static_cast<unsigned char>(data[data.size() - 8 + i]);
        std::string_view body = data.substr(0, data.size() - 8);
        if (fnv1a64(body.data(), body.size()) != stored)
            throw ParseError("model file checksum mismatch");

        detail::ByteReader r(body);
        if (r.bytes(4) != "ETLM") throw ParseError("not a language model file");
        if (r.u32() != kVersion) throw ParseError("unsupported model file version");
        NgramLm lm;
        lm.order_ = r.u8();
        if (lm.order_ < 1 || lm.order_ > 5) throw ParseError("bad model order");
        lm.lambdas_.resize(lm.order_);
        for (double& l : lm.lambdas_) l = r.f64();
        check_lambdas(lm.lambdas_, lm.order_);
        std::uint32_t vocab = r.u32();
        lm.tokens_.reserve(vocab);
        for (std::uint32_t i = 0; i < vocab; ++i) {
            std::uint32_t len = r.u32();
            lm.tokens_.push_back(r.bytes(len));
            lm.index_[lm.tokens_.back()] = static_cast<Id>(i + kFirstRealId);
        }
        lm.numer_.assign(lm.order_ + 1, {});
        for (int k = 1; k <= lm.order_; ++k) {
            std::uint64_t entries = r.u64();
            IdTuple prev;
            for (std::uint64_t e = 0; e < entries; ++e) {
                IdTuple gram(k);
                for (int i = 0; i < k; ++i) {
                    gram[i] = r.u32();
                    if (gram[i] >= lm.vocab_size())
                        throw ParseError("model file references unknown token id");
                }
                if (e > 0 && !(prev < gram))
                    throw ParseError("model file n-gram run is not sorted");
                std::uint64_t count = r.u64();
                lm.numer_[k].emplace(gram, count);
                prev = std::move(gram);
            }
        }
        if (r.remaining() != 0) throw ParseError("trailing bytes in model file");
        lm.rebuild_denominators();
        return lm;
    }

    static NgramLm load_file(const std::string& path) { return load(read_file(path)); }

private:
    static constexpr std::uint32_t kVersion = 1;
    static constexpr Id kFirstRealId = 3;

    static std::vector<double> default_lambdas(int order) {
        if (order == 3) return {0.1, 0.3, 0.6};
        return std::vector<double>(order, 1.0 / order);
    }

    static void check_lambdas(const std::vector<double>& lambdas, int order) {
        if (static_cast<int>(lambdas.size()) != order)
            throw ValidationError("need one interpolation weight per order");
        double sum = 0.0;
        for (double l : lambdas) {
            if (l < 0.0) throw ValidationError("interpolation weights must be non-negative");
            sum += l;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw ValidationError("interpolation weights must sum to 1");
    }

    IdTuple normalize_context(const IdTuple& context) const {
        const std::size_t need = order_ - 1;
        IdTuple ctx;
        ctx.reserve(need);
        if (context.size() >= need) {
            ctx.assign(context.end() - need, context.end());
        } else {
            ctx.assign(need - context.size(), kBos);
            ctx.insert(ctx.end(), context.begin(), context.end());
        }
        return ctx;
    }

    void rebuild_denominators() {
        denom_.assign(order_ + 1, {});
        for (int k = 1; k <= order_; ++k)
            for (const auto& [gram, count] : numer_[k]) {
                IdTuple ctx(gram.begin(), gram.end() - 1);
                denom_[k][ctx] += count;
            }
    }

    int order_ = 0;
    std::vector<double> lambdas_;
    std::vector<std::string> tokens_;
    std::map<std::string, Id> index_;
    std::vector<std::map<IdTuple, std::uint64_t>> numer_;
    std::vector<std::map<IdTuple, std::uint64_t>> denom_;
};

}  // namespace gecw
