#pragma once

// Shared utilities: UTF-8 handling, Latin diacritic composition, character
// classification, hashing, and the error types used across the toolkit.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace gecw {

// Raised for structurally malformed input. Carries the 1-based line number
// when the failing input is line-oriented (0 = not applicable).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& message, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message),
          line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Raised when well-formed input violates a semantic invariant
// (span out of bounds, overlapping edits, bad rates, ...).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Collector for non-fatal diagnostics (unknown labels, extra annotators...).
// Parsers take an optional pointer; null means "drop warnings".
struct Diagnostics {
    std::vector<std::string> warnings;
    void warn(std::string msg) { warnings.push_back(std::move(msg)); }
};

inline void warn_to(Diagnostics* diag, std::string msg) {
    if (diag) diag->warn(std::move(msg));
}

// ---------------------------------------------------------------------------
// UTF-8

inline std::vector<char32_t> utf8_decode(std::string_view s) {
    std::vector<char32_t> out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        char32_t cp = 0;
        std::size_t n = 0;
        if (c < 0x80) {
            cp = c;
            n = 1;
        } else if ((c & 0xE0) == 0xC0) {
            cp = c & 0x1F;
            n = 2;
        } else if ((c & 0xF0) == 0xE0) {
            cp = c & 0x0F;
            n = 3;
        } else if ((c & 0xF8) == 0xF0) {
            cp = c & 0x07;
            n = 4;
        } else {
            throw ParseError("invalid UTF-8 lead byte");
        }
        if (i + n > s.size()) throw ParseError("truncated UTF-8 sequence");
        for (std::size_t k = 1; k < n; ++k) {
            unsigned char cc = static_cast<unsigned char>(s[i + k]);
            if ((cc & 0xC0) != 0x80) throw ParseError("invalid UTF-8 continuation byte");
            cp = (cp << 6) | (cc & 0x3F);
        }
        if ((n == 2 && cp < 0x80) || (n == 3 && cp < 0x800) || (n == 4 && cp < 0x10000) ||
            (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF)
            throw ParseError("invalid UTF-8 scalar value");
        out.push_back(cp);
        i += n;
    }
    return out;
}

inline void utf8_append(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

inline std::string utf8_encode(const std::vector<char32_t>& cps) {
    std::string out;
    out.reserve(cps.size());
    for (char32_t cp : cps) utf8_append(out, cp);
    return out;
}

inline std::size_t codepoint_count(std::string_view s) { return utf8_decode(s).size(); }

// ---------------------------------------------------------------------------
// Case mapping. Covers ASCII, Latin-1 Supplement and Latin Extended-A, which
// is what Estonian and the surrounding European corpora need. Everything else
// maps to itself.

inline char32_t simple_lower(char32_t c) {
    if (c >= U'A' && c <= U'Z') return c + 0x20;
    if (c >= 0x00C0 && c <= 0x00DE && c != 0x00D7) return c + 0x20;
    // Latin Extended-A pairs upper/lower alternate; the alternation phase
    // flips at U+0139 and again at U+014A and U+0179.
    if ((c >= 0x0100 && c <= 0x0137) || (c >= 0x014A && c <= 0x0177)) {
        return (c % 2 == 0) ? c + 1 : c;
    }
    if ((c >= 0x0139 && c <= 0x0148) || (c >= 0x0179 && c <= 0x017E)) {
        return (c % 2 == 1) ? c + 1 : c;
    }
    if (c == 0x0178) return 0x00FF;  // Y with diaeresis
    return c;
}

inline bool is_upper_letter(char32_t c) { return simple_lower(c) != c; }

inline bool is_lower_letter(char32_t c) {
    if (c >= U'a' && c <= U'z') return true;
    if (c >= 0x00DF && c <= 0x00FF && c != 0x00F7) return true;
    if (c >= 0x0100 && c <= 0x017E) return !is_upper_letter(c);
    return false;
}

inline bool is_letter(char32_t c) { return is_upper_letter(c) || is_lower_letter(c); }

inline std::string lower_copy(std::string_view s) {
    auto cps = utf8_decode(s);
    for (auto& c : cps) c = simple_lower(c);
    return utf8_encode(cps);
}

inline bool ci_equal(std::string_view a, std::string_view b) {
    if (a == b) return true;
    return lower_copy(a) == lower_copy(b);
}

// ---------------------------------------------------------------------------
// Canonical composition of Latin base + combining-mark sequences into their
// precomposed forms. Not full Unicode NFC: the table covers the combining
// diacritics of European Latin orthographies (incl. Estonian s-caron,
// z-caron, o-tilde and the umlauts); unsupported sequences pass through.

namespace detail {

struct Composition {
    char32_t base;
    char32_t mark;
    char32_t composed;
};

inline const std::vector<Composition>& composition_table() {
    static const std::vector<Composition> table = {
        // grave U+0300
        {U'A', 0x0300, 0x00C0}, {U'E', 0x0300, 0x00C8}, {U'I', 0x0300, 0x00CC},
        {U'O', 0x0300, 0x00D2}, {U'U', 0x0300, 0x00D9},
        {U'a', 0x0300, 0x00E0}, {U'e', 0x0300, 0x00E8}, {U'i', 0x0300, 0x00EC},
        {U'o', 0x0300, 0x00F2}, {U'u', 0x0300, 0x00F9},
        // acute U+0301
        {U'A', 0x0301, 0x00C1}, {U'E', 0x0301, 0x00C9}, {U'I', 0x0301, 0x00CD},
        {U'O', 0x0301, 0x00D3}, {U'U', 0x0301, 0x00DA}, {U'Y', 0x0301, 0x00DD},
        {U'a', 0x0301, 0x00E1}, {U'e', 0x0301, 0x00E9}, {U'i', 0x0301, 0x00ED},
        {U'o', 0x0301, 0x00F3}, {U'u', 0x0301, 0x00FA}, {U'y', 0x0301, 0x00FD},
        {U'C', 0x0301, 0x0106}, {U'c', 0x0301, 0x0107}, {U'L', 0x0301, 0x0139},
        {U'l', 0x0301, 0x013A}, {U'N', 0x0301, 0x0143}, {U'n', 0x0301, 0x0144},
        {U'R', 0x0301, 0x0154}, {U'r', 0x0301, 0x0155}, {U'S', 0x0301, 0x015A},
        {U's', 0x0301, 0x015B}, {U'Z', 0x0301, 0x0179}, {U'z', 0x0301, 0x017A},
        // circumflex U+0302
        {U'A', 0x0302, 0x00C2}, {U'E', 0x0302, 0x00CA}, {U'I', 0x0302, 0x00CE},
        {U'O', 0x0302, 0x00D4}, {U'U', 0x0302, 0x00DB},
        {U'a', 0x0302, 0x00E2}, {U'e', 0x0302, 0x00EA}, {U'i', 0x0302, 0x00EE},
        {U'o', 0x0302, 0x00F4}, {U'u', 0x0302, 0x00FB},
        {U'C', 0x0302, 0x0108}, {U'c', 0x0302, 0x0109}, {U'G', 0x0302, 0x011C},
        {U'g', 0x0302, 0x011D}, {U'H', 0x0302, 0x0124}, {U'h', 0x0302, 0x0125},
        {U'J', 0x0302, 0x0134}, {U'j', 0x0302, 0x0135}, {U'S', 0x0302, 0x015C},
        {U's', 0x0302, 0x015D}, {U'W', 0x0302, 0x0174}, {U'w', 0x0302, 0x0175},
        {U'Y', 0x0302, 0x0176}, {U'y', 0x0302, 0x0177},
        // tilde U+0303
        {U'A', 0x0303, 0x00C3}, {U'N', 0x0303, 0x00D1}, {U'O', 0x0303, 0x00D5},
        {U'a', 0x0303, 0x00E3}, {U'n', 0x0303, 0x00F1}, {U'o', 0x0303, 0x00F5},
        {U'I', 0x0303, 0x0128}, {U'i', 0x0303, 0x0129}, {U'U', 0x0303, 0x0168},
        {U'u', 0x0303, 0x0169},
        // macron U+0304
        {U'A', 0x0304, 0x0100}, {U'a', 0x0304, 0x0101}, {U'E', 0x0304, 0x0112},
        {U'e', 0x0304, 0x0113}, {U'I', 0x0304, 0x012A}, {U'i', 0x0304, 0x012B},
        {U'O', 0x0304, 0x014C}, {U'o', 0x0304, 0x014D}, {U'U', 0x0304, 0x016A},
        {U'u', 0x0304, 0x016B},
        // breve U+0306
        {U'A', 0x0306, 0x0102}, {U'a', 0x0306, 0x0103}, {U'E', 0x0306, 0x0114},
        {U'e', 0x0306, 0x0115}, {U'G', 0x0306, 0x011E}, {U'g', 0x0306, 0x011F},
        {U'I', 0x0306, 0x012C}, {U'i', 0x0306, 0x012D}, {U'O', 0x0306, 0x014E},
        {U'o', 0x0306, 0x014F}, {U'U', 0x0306, 0x016C}, {U'u', 0x0306, 0x016D},
        // dot above U+0307
        {U'C', 0x0307, 0x010A}, {U'c', 0x0307, 0x010B}, {U'E', 0x0307, 0x0116},
        {U'e', 0x0307, 0x0117}, {U'G', 0x0307, 0x0120}, {U'g', 0x0307, 0x0121},
        {U'I', 0x0307, 0x0130}, {U'Z', 0x0307, 0x017B}, {U'z', 0x0307, 0x017C},
        // diaeresis U+0308
        {U'A', 0x0308, 0x00C4}, {U'E', 0x0308, 0x00CB}, {U'I', 0x0308, 0x00CF},
        {U'O', 0x0308, 0x00D6}, {U'U', 0x0308, 0x00DC},
        {U'a', 0x0308, 0x00E4}, {U'e', 0x0308, 0x00EB}, {U'i', 0x0308, 0x00EF},
        {U'o', 0x0308, 0x00F6}, {U'u', 0x0308, 0x00FC}, {U'y', 0x0308, 0x00FF},
        {U'Y', 0x0308, 0x0178},
        // ring above U+030A
        {U'A', 0x030A, 0x00C5}, {U'a', 0x030A, 0x00E5}, {U'U', 0x030A, 0x016E},
        {U'u', 0x030A, 0x016F},
        // double acute U+030B
        {U'O', 0x030B, 0x0150}, {U'o', 0x030B, 0x0151}, {U'U', 0x030B, 0x0170},
        {U'u', 0x030B, 0x0171},
        // caron U+030C
        {U'C', 0x030C, 0x010C}, {U'c', 0x030C, 0x010D}, {U'D', 0x030C, 0x010E},
        {U'd', 0x030C, 0x010F}, {U'E', 0x030C, 0x011A}, {U'e', 0x030C, 0x011B},
        {U'L', 0x030C, 0x013D}, {U'l', 0x030C, 0x013E}, {U'N', 0x030C, 0x0147},
        {U'n', 0x030C, 0x0148}, {U'R', 0x030C, 0x0158}, {U'r', 0x030C, 0x0159},
        {U'S', 0x030C, 0x0160}, {U's', 0x030C, 0x0161}, {U'T', 0x030C, 0x0164},
        {U't', 0x030C, 0x0165}, {U'Z', 0x030C, 0x017D}, {U'z', 0x030C, 0x017E},
        // cedilla U+0327
        {U'C', 0x0327, 0x00C7}, {U'c', 0x0327, 0x00E7}, {U'G', 0x0327, 0x0122},
        {U'g', 0x0327, 0x0123}, {U'K', 0x0327, 0x0136}, {U'k', 0x0327, 0x0137},
        {U'L', 0x0327, 0x013B}, {U'l', 0x0327, 0x013C}, {U'N', 0x0327, 0x0145},
        {U'n', 0x0327, 0x0146}, {U'R', 0x0327, 0x0156}, {U'r', 0x0327, 0x0157},
        {U'S', 0x0327, 0x015E}, {U's', 0x0327, 0x015F}, {U'T', 0x0327, 0x0162},
        {U't', 0x0327, 0x0163},
        // ogonek U+0328
        {U'A', 0x0328, 0x0104}, {U'a', 0x0328, 0x0105}, {U'E', 0x0328, 0x0118},
        {U'e', 0x0328, 0x0119}, {U'I', 0x0328, 0x012E}, {U'i', 0x0328, 0x012F},
        {U'U', 0x0328, 0x0172}, {U'u', 0x0328, 0x0173},
    };
    return table;
}

inline char32_t compose_pair(char32_t base, char32_t mark) {
    for (const auto& c : composition_table())
        if (c.base == base && c.mark == mark) return c.composed;
    return 0;
}

}  // namespace detail

inline std::string compose_latin(std::string_view s) {
    auto cps = utf8_decode(s);
    std::vector<char32_t> out;
    out.reserve(cps.size());
    for (char32_t cp : cps) {
        if (!out.empty() && cp >= 0x0300 && cp <= 0x0328) {
            if (char32_t comp = detail::compose_pair(out.back(), cp)) {
                out.back() = comp;
                continue;
            }
        }
        out.push_back(cp);
    }
    return utf8_encode(out);
}

// ---------------------------------------------------------------------------
// Character classification for the noiser and the corrector guards.

// Unicode general category P for Basic Latin, Latin-1 and the General
// Punctuation block; enough for tokenized European text.
inline bool is_punct_codepoint(char32_t c) {
    static const std::u32string_view ascii = U"!\"#%&'()*,-./:;?@[\\]_{}";
    if (c < 0x80) return ascii.find(c) != std::u32string_view::npos;
    switch (c) {
        case 0x00A1:  // inverted exclamation
        case 0x00A7:  // section sign
        case 0x00AB:  // left guillemet
        case 0x00B6:  // pilcrow
        case 0x00B7:  // middle dot
        case 0x00BB:  // right guillemet
        case 0x00BF:  // inverted question
            return true;
        default:
            break;
    }
    if (c >= 0x2010 && c <= 0x2027) return true;   // dashes, quotes, daggers, ellipsis
    if (c >= 0x2030 && c <= 0x205E) return true;   // permille .. punctuation space tail
    return false;
}

inline bool is_punct_token(std::string_view tok) {
    auto cps = utf8_decode(tok);
    if (cps.empty()) return false;
    return std::all_of(cps.begin(), cps.end(), is_punct_codepoint);
}

inline bool contains_digit(std::string_view tok) {
    return std::any_of(tok.begin(), tok.end(),
                       [](char c) { return c >= '0' && c <= '9'; });
}

inline bool is_all_caps(std::string_view tok) {
    auto cps = utf8_decode(tok);
    std::size_t letters = 0;
    for (char32_t c : cps) {
        if (is_lower_letter(c)) return false;
        if (is_upper_letter(c)) ++letters;
    }
    return letters >= 2;
}

inline bool starts_uppercase(std::string_view tok) {
    auto cps = utf8_decode(tok);
    return !cps.empty() && is_upper_letter(cps[0]);
}

// ---------------------------------------------------------------------------
// Tokens and text lines

using Tokens = std::vector<std::string>;

inline Tokens split_tokens(std::string_view line) {
    Tokens out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && line[i] == ' ') ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ') ++j;
        if (j > i) out.emplace_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

inline std::string join_tokens(const Tokens& tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out.push_back(' ');
        out += tokens[i];
    }
    return out;
}

inline std::vector<std::string> split_on(std::string_view s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            parts.emplace_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return parts;
}

// ---------------------------------------------------------------------------
// Whole-file I/O. Binary mode everywhere; the formats own their newlines.

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failed on " + path);
    return buf.str();
}

inline void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed on " + path);
}

// ---------------------------------------------------------------------------
// FNV-1a 64-bit, used as the truncation guard in binary model files.

inline std::uint64_t fnv1a64(const void* data, std::size_t size,
                             std::uint64_t seed = 0xCBF29CE484222325ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= p[i];
        h *= 0x100000001B3ULL;
    }
    return h;
}

// Fixed 4-decimal formatting used in machine-readable reports.
inline std::string format_fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

// Runs fn(0..count-1) on up to `jobs` threads. The first exception wins and
// is rethrown on the calling thread after every worker has stopped.
template <class Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn&& fn) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::exception_ptr err;
    auto worker = [&] {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!err) err = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<unsigned>(jobs, static_cast<unsigned>(count)); ++t)
        pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace gecw
