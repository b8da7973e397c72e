#pragma once

// M2 annotation files: one block per sentence, a tokenized `S` line followed
// by `A` lines of the form
//   A start end|||label|||correction|||REQUIRED|||-NONE-|||annotator
// Blocks are separated by blank lines. `-NONE-` stands for an empty
// correction; `A -1 -1|||noop|||...` records an annotator who saw nothing to
// fix. A block without any `A` line is read as annotator 0 with no edits.

#include <charconv>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "gecw/corpus.hpp"
#include "gecw/labels.hpp"
#include "gecw/util.hpp"

namespace gecw {

namespace detail {

inline bool parse_int(std::string_view s, int& out) {
    if (s.empty()) return false;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
}

inline bool parse_int_u64(std::string_view s, std::uint64_t& out) {
    if (s.empty()) return false;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
}

inline std::vector<std::string> split_fields(std::string_view s) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find("|||", start);
        if (pos == std::string_view::npos) {
            fields.emplace_back(s.substr(start));
            break;
        }
        fields.emplace_back(s.substr(start, pos - start));
        start = pos + 3;
    }
    return fields;
}

}  // namespace detail

inline Corpus parse_m2(std::string_view text, Diagnostics* diag = nullptr,
                       const LabelMap* label_map = nullptr) {
    Corpus corpus;
    bool in_block = false;
    std::size_t block_line = 0;
    AnnotatedSentence cur;
    std::set<int> noop_annotators;

    auto finish_block = [&]() {
        std::set<int> ids(noop_annotators.begin(), noop_annotators.end());
        for (const Edit& e : cur.edits) {
            if (noop_annotators.count(e.annotator))
                throw ParseError("annotator " + std::to_string(e.annotator) +
                                     " has both noop and concrete edits",
                                 block_line);
            ids.insert(e.annotator);
        }
        if (ids.empty()) ids.insert(0);
        cur.annotators.assign(ids.begin(), ids.end());
        try {
            validate_sentence(cur, diag);
        } catch (const ValidationError& e) {
            throw ParseError(e.what(), block_line);
        }
        corpus.push_back(std::move(cur));
        cur = AnnotatedSentence{};
        noop_annotators.clear();
        in_block = false;
    };

    std::size_t lineno = 0;
    for (std::string& line : split_on(text, '\n')) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            if (in_block) finish_block();
            continue;
        }
        if (line == "S" || line.rfind("S ", 0) == 0) {
            if (in_block) throw ParseError("sentence line inside an open block", lineno);
            in_block = true;
            block_line = lineno;
            cur.source = split_tokens(line.size() > 1 ? std::string_view(line).substr(2)
                                                      : std::string_view());
            continue;
        }
        if (line.rfind("A ", 0) == 0) {
            if (!in_block) throw ParseError("annotation line before any sentence", lineno);
            auto fields = detail::split_fields(std::string_view(line).substr(2));
            if (fields.size() != 6)
                throw ParseError("annotation needs 6 |||-separated fields, got " +
                                     std::to_string(fields.size()),
                                 lineno);
            auto span = split_on(fields[0], ' ');
            int start = 0, end = 0;
            if (span.size() != 2 || !detail::parse_int(span[0], start) ||
                !detail::parse_int(span[1], end))
                throw ParseError("bad span '" + fields[0] + "'", lineno);
            int annotator = 0;
            if (!detail::parse_int(fields[5], annotator) || annotator < 0)
                throw ParseError("bad annotator id '" + fields[5] + "'", lineno);
            std::string label_text =
                label_map ? label_map->canonical(fields[1]) : fields[1];
            if (label_text == "noop") {
                if (start != -1 || end != -1)
                    throw ParseError("noop must use span -1 -1", lineno);
                if (!noop_annotators.insert(annotator).second)
                    throw ParseError("duplicate noop for annotator " + std::to_string(annotator),
                                     lineno);
                continue;
            }
            if (start < 0 || end < 0)
                throw ParseError("negative span on a non-noop annotation", lineno);
            Edit e;
            e.start = start;
            e.end = end;
            e.annotator = annotator;
            if (fields[2] != "-NONE-") e.correction = split_tokens(fields[2]);
            try {
                e.label = parse_label(label_text);
            } catch (const UnknownLabel&) {
                warn_to(diag, "line " + std::to_string(lineno) + ": unknown label '" +
                                  label_text + "' kept as opaque");
                e.label = ErrorLabel::opaque(label_text);
            } catch (const InvalidCompound& ic) {
                throw ParseError(std::string("bad compound label '") + label_text +
                                     "': " + ic.what(),
                                 lineno);
            }
            cur.edits.push_back(std::move(e));
            continue;
        }
        throw ParseError("unrecognized line '" + line + "'", lineno);
    }
    if (in_block) finish_block();
    return corpus;
}

inline std::string serialize_m2(const Corpus& corpus) {
    std::string out;
    for (const AnnotatedSentence& s : corpus) {
        if (s.source.empty())
            out += "S\n";
        else
            out += "S " + join_tokens(s.source) + "\n";
        std::set<int> ids(s.annotators.begin(), s.annotators.end());
        for (const Edit& e : s.edits) ids.insert(e.annotator);
        if (ids.empty()) ids.insert(0);
        for (int id : ids) {
            std::vector<Edit> edits = s.edits_for(id);
            std::stable_sort(edits.begin(), edits.end(), [](const Edit& a, const Edit& b) {
                if (a.start != b.start) return a.start < b.start;
                return a.end < b.end;
            });
            if (edits.empty()) {
                out += "A -1 -1|||noop|||-NONE-|||REQUIRED|||-NONE-|||" + std::to_string(id) +
                       "\n";
                continue;
            }
            for (const Edit& e : edits) {
                out += "A " + std::to_string(e.start) + " " + std::to_string(e.end) + "|||" +
                       e.label.to_string() + "|||" +
                       (e.correction.empty() ? std::string("-NONE-") : join_tokens(e.correction)) +
                       "|||REQUIRED|||-NONE-|||" + std::to_string(e.annotator) + "\n";
            }
        }
        out += "\n";
    }
    return out;
}

}  // namespace gecw
