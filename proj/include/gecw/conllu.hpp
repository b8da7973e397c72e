#pragma once

// Minimal CoNLL-U reader: only the ID, FORM and UPOS columns are used.
// Comment lines and multiword-token ranges (IDs like 4-5) are skipped;
// anything else with a non-integer ID or without a UPOS column is an error.
// Also hosts the plain-text reader (one tokenized sentence per line).

#include <string>
#include <string_view>
#include <vector>

#include "gecw/corpus.hpp"
#include "gecw/m2.hpp"
#include "gecw/util.hpp"

namespace gecw {

inline std::vector<TaggedSentence> parse_conllu(std::string_view text) {
    std::vector<TaggedSentence> out;
    TaggedSentence cur;
    std::size_t lineno = 0;
    auto flush = [&]() {
        if (!cur.tokens.empty()) out.push_back(std::move(cur));
        cur = TaggedSentence{};
    };
    for (std::string& line : split_on(text, '\n')) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            flush();
            continue;
        }
        if (line[0] == '#') continue;
        auto cols = split_on(line, '\t');
        if (cols[0].find('-') != std::string::npos) continue;
        int id = 0;
        if (!detail::parse_int(cols[0], id) || id <= 0)
            throw ParseError("bad token id '" + cols[0] + "'", lineno);
        if (cols.size() < 4 || cols[1].empty() || cols[3].empty())
            throw ParseError("need at least FORM and UPOS columns", lineno);
        cur.tokens.push_back(cols[1]);
        cur.pos.push_back(cols[3]);
    }
    flush();
    return out;
}

// One sentence per line, tokens separated by single spaces. Blank lines are
// kept as empty sentences so line numbers stay aligned across parallel files.
inline std::vector<Tokens> parse_plain(std::string_view text) {
    std::vector<Tokens> out;
    auto lines = split_on(text, '\n');
    if (!lines.empty() && lines.back().empty()) lines.pop_back();
    for (std::string& line : lines) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        out.push_back(split_tokens(line));
    }
    return out;
}

inline std::string serialize_plain(const std::vector<Tokens>& sentences) {
    std::string out;
    for (const Tokens& s : sentences) out += join_tokens(s) + "\n";
    return out;
}

}  // namespace gecw
