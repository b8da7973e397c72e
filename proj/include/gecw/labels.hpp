#pragma once

// Estonian error-label scheme: 12 base labels plus compound labels joined
// with '+'. Compounds combine replacement-family labels only (never R:WO,
// which is handled by nesting instead). Corpus tags that differ from the
// canonical codes can be remapped through a tab-separated mapping file.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gecw/util.hpp"

namespace gecw {

enum class BaseLabel : unsigned char {
    MissingWord,      // M:WORD
    UnnecessaryWord,  // U:WORD
    MissingPunct,     // M:PUNCT
    UnnecessaryPunct, // U:PUNCT
    ReplacePunct,     // R:PUNCT
    Spelling,         // R:SPELL
    Capitalization,   // R:CAP
    Compounding,      // R:CMP  (together/apart writing)
    NominalForm,      // R:NOM-FORM
    VerbForm,         // R:VERB-FORM
    WordChoice,       // R:LEX
    WordOrder,        // R:WO   (multi-word replacement)
};

inline constexpr std::size_t kBaseLabelCount = 12;

inline constexpr std::array<std::string_view, kBaseLabelCount> kBaseLabelCodes = {
    "M:WORD", "U:WORD", "M:PUNCT", "U:PUNCT", "R:PUNCT", "R:SPELL",
    "R:CAP",  "R:CMP",  "R:NOM-FORM", "R:VERB-FORM", "R:LEX", "R:WO",
};

inline std::string_view to_code(BaseLabel b) {
    return kBaseLabelCodes[static_cast<std::size_t>(b)];
}

inline std::optional<BaseLabel> base_label_from_code(std::string_view code) {
    for (std::size_t i = 0; i < kBaseLabelCount; ++i)
        if (kBaseLabelCodes[i] == code) return static_cast<BaseLabel>(i);
    return std::nullopt;
}

inline bool is_replacement_family(BaseLabel b) {
    switch (b) {
        case BaseLabel::ReplacePunct:
        case BaseLabel::Spelling:
        case BaseLabel::Capitalization:
        case BaseLabel::Compounding:
        case BaseLabel::NominalForm:
        case BaseLabel::VerbForm:
        case BaseLabel::WordChoice:
        case BaseLabel::WordOrder:
            return true;
        default:
            return false;
    }
}

class UnknownLabel : public ValidationError {
public:
    explicit UnknownLabel(const std::string& text)
        : ValidationError("unknown error label: " + text), text_(text) {}
    const std::string& text() const noexcept { return text_; }

private:
    std::string text_;
};

class InvalidCompound : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// An error label: the `noop` sentinel, one or more known base components,
// or an opaque tag preserved verbatim from a third-party file. Opaque labels
// participate in overall scoring but carry no base components, so they stay
// out of the per-type tables.
class ErrorLabel {
public:
    ErrorLabel() : kind_(Kind::Noop) {}

    static ErrorLabel noop() { return ErrorLabel(); }

    static ErrorLabel simple(BaseLabel b) { return ErrorLabel(std::vector<BaseLabel>{b}); }

    static ErrorLabel compound(std::vector<BaseLabel> components) {
        if (components.empty()) throw InvalidCompound("empty label");
        if (components.size() > 1) {
            if (components.size() > 3)
                throw InvalidCompound("compound label with more than 3 components");
            for (BaseLabel b : components) {
                if (!is_replacement_family(b) || b == BaseLabel::WordOrder)
                    throw InvalidCompound(
                        "compound label may only combine replacement labels other than R:WO");
            }
            for (std::size_t i = 0; i < components.size(); ++i)
                for (std::size_t j = i + 1; j < components.size(); ++j)
                    if (components[i] == components[j])
                        throw InvalidCompound("duplicate component in compound label");
        }
        return ErrorLabel(std::move(components));
    }

    static ErrorLabel opaque(std::string text) {
        ErrorLabel l;
        l.kind_ = Kind::Opaque;
        l.opaque_ = std::move(text);
        return l;
    }

    bool is_noop() const noexcept { return kind_ == Kind::Noop; }
    bool is_opaque() const noexcept { return kind_ == Kind::Opaque; }
    bool is_compound() const noexcept { return kind_ == Kind::Known && components_.size() > 1; }

    // Component set; empty for noop and opaque labels.
    const std::vector<BaseLabel>& base_components() const noexcept { return components_; }

    bool has_component(BaseLabel b) const {
        for (BaseLabel c : components_)
            if (c == b) return true;
        return false;
    }

    bool is_word_order() const { return has_component(BaseLabel::WordOrder); }

    std::string to_string() const {
        switch (kind_) {
            case Kind::Noop:
                return "noop";
            case Kind::Opaque:
                return opaque_;
            case Kind::Known: {
                std::string out;
                for (std::size_t i = 0; i < components_.size(); ++i) {
                    if (i) out.push_back('+');
                    out += to_code(components_[i]);
                }
                return out;
            }
        }
        return {};
    }

    friend bool operator==(const ErrorLabel& a, const ErrorLabel& b) {
        return a.kind_ == b.kind_ && a.components_ == b.components_ && a.opaque_ == b.opaque_;
    }
    friend bool operator!=(const ErrorLabel& a, const ErrorLabel& b) { return !(a == b); }

private:
    enum class Kind : unsigned char { Noop, Known, Opaque };

    explicit ErrorLabel(std::vector<BaseLabel> components)
        : kind_(Kind::Known), components_(std::move(components)) {}

    Kind kind_;
    std::vector<BaseLabel> components_;
    std::string opaque_;
};

// Splits on '+' and validates the compound constraints. Unknown components
// raise UnknownLabel; callers that want to keep scoring third-party files
// catch it and fall back to ErrorLabel::opaque.
inline ErrorLabel parse_label(std::string_view text) {
    if (text == "noop") return ErrorLabel::noop();
    std::vector<BaseLabel> components;
    for (const std::string& part : split_on(text, '+')) {
        auto b = base_label_from_code(part);
        if (!b) throw UnknownLabel(std::string(text));
        components.push_back(*b);
    }
    return ErrorLabel::compound(std::move(components));
}

inline std::vector<BaseLabel> base_components(const ErrorLabel& label) {
    return label.base_components();
}

// Optional corpus-tag remapping, loaded from a plain-text file of
// `corpus-tag<TAB>canonical-code` lines ('#' starts a comment).
class LabelMap {
public:
    LabelMap() = default;

    static LabelMap parse(std::string_view text) {
        LabelMap m;
        std::size_t lineno = 0;
        for (const std::string& raw : split_on(text, '\n')) {
            ++lineno;
            std::string line = raw;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '#') continue;
            auto fields = split_on(line, '\t');
            if (fields.size() != 2 || fields[0].empty() || fields[1].empty())
                throw ParseError("expected corpus-tag<TAB>canonical-code", lineno);
            m.map_[fields[0]] = fields[1];
        }
        return m;
    }

    // Returns the canonical spelling for a raw corpus tag (identity when
    // unmapped). Compound tags are remapped component-wise as well, so a
    // mapping for "SP" also rewrites "SP+R:NOM-FORM".
    std::string canonical(const std::string& raw) const {
        if (map_.empty()) return raw;
        auto it = map_.find(raw);
        if (it != map_.end()) return it->second;
        if (raw.find('+') == std::string::npos) return raw;
        std::string out;
        auto parts = split_on(raw, '+');
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i) out.push_back('+');
            auto p = map_.find(parts[i]);
            out += (p != map_.end()) ? p->second : parts[i];
        }
        return out;
    }

    bool empty() const noexcept { return map_.empty(); }

private:
    std::map<std::string, std::string> map_;
};

}  // namespace gecw
