#include "ldscore/text.hpp"

#include <algorithm>
#include <optional>

namespace ldscore::text {

namespace {

struct FoldEntry {
    char32_t code_point;
    std::string_view folded;
};

// Generated from CaseFolding.txt (C+F): every non-ASCII code point whose
// folding contains a-z, with non-a-z output characters replaced by ' '.
constexpr std::array<FoldEntry, 19> kFoldTable{{
    {0x00DF, "ss"},   // sharp s
    {0x0130, "i "},   // I with dot above -> i + combining dot
    {0x0149, " n"},   // n preceded by apostrophe
    {0x017F, "s"},    // long s
    {0x01F0, "j "},   // j with caron
    {0x1E96, "h "},
    {0x1E97, "t "},
    {0x1E98, "w "},
    {0x1E99, "y "},
    {0x1E9A, "a "},
    {0x1E9E, "ss"},   // capital sharp s
    {0x212A, "k"},    // Kelvin sign
    {0xFB00, "ff"},
    {0xFB01, "fi"},
    {0xFB02, "fl"},
    {0xFB03, "ffi"},
    {0xFB04, "ffl"},
    {0xFB05, "st"},
    {0xFB06, "st"},
}};

std::optional<std::string_view> lookup_fold(char32_t cp) {
    const auto it = std::lower_bound(
        kFoldTable.begin(), kFoldTable.end(), cp,
        [](const FoldEntry& e, char32_t v) { return e.code_point < v; });
    if (it != kFoldTable.end() && it->code_point == cp) return it->folded;
    return std::nullopt;
}

// Decodes one code point starting at s[i]; returns the byte length consumed,
// or 0 when the sequence is malformed.
std::size_t decode(std::string_view s, std::size_t i, char32_t& out) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    std::size_t len;
    char32_t cp;
    char32_t min;
    if (b0 < 0x80) {
        out = b0;
        return 1;
    } else if ((b0 & 0xE0) == 0xC0) {
        len = 2; cp = b0 & 0x1F; min = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3; cp = b0 & 0x0F; min = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4; cp = b0 & 0x07; min = 0x10000;
    } else {
        return 0;
    }
    if (i + len > s.size()) return 0;
    for (std::size_t k = 1; k < len; ++k) {
        const auto b = static_cast<unsigned char>(s[i + k]);
        if ((b & 0xC0) != 0x80) return 0;
        cp = (cp << 6) | (b & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return 0;
    out = cp;
    return len;
}

template <class Sink>
void for_each_folded(std::string_view utf8, Sink&& sink) {
    std::size_t i = 0;
    while (i < utf8.size()) {
        char32_t cp = 0;
        const std::size_t len = decode(utf8, i, cp);
        if (len == 0) {
            sink(' ');
            ++i;
            continue;
        }
        i += len;
        if (cp >= 'a' && cp <= 'z') {
            sink(static_cast<char>(cp));
        } else if (cp >= 'A' && cp <= 'Z') {
            sink(static_cast<char>(cp - 'A' + 'a'));
        } else if (cp < 0x80) {
            sink(' ');
        } else if (auto folded = lookup_fold(cp)) {
            for (char c : *folded) sink(c);
        } else {
            sink(' ');
        }
    }
}

}  // namespace

std::string fold(std::string_view utf8) {
    std::string out;
    out.reserve(utf8.size());
    for_each_folded(utf8, [&](char c) { out.push_back(c); });
    return out;
}

LetterCounts count_letters(std::string_view utf8) {
    LetterCounts counts{};
    for_each_folded(utf8, [&](char c) {
        if (is_letter(c)) ++counts[static_cast<std::size_t>(c - 'a')];
    });
    return counts;
}

std::vector<std::string> tokenize(std::string_view utf8) {
    std::vector<std::string> tokens;
    std::string current;
    for_each_folded(utf8, [&](char c) {
        if (is_letter(c)) {
            current.push_back(c);
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    });
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

}  // namespace ldscore::text
