#pragma once
// Character folding shared by letter statistics, tokenization and the
// adversarial counters.
//
// Input is UTF-8. Each code point is replaced by its full Unicode case
// folding (Unicode 13 CaseFolding.txt, status C+F); in the folded output
// ASCII a-z are kept and every other character becomes a single space.
// Only 19 non-ASCII code points fold to anything containing a-z (sharp s,
// the Kelvin sign, long s, the Latin ligatures, ...). Malformed UTF-8 bytes
// become spaces.

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ldscore::text {

inline constexpr std::size_t kAlphabetSize = 26;
using LetterCounts = std::array<std::uint64_t, kAlphabetSize>;

// Folded projection of `utf8`: only 'a'..'z' and ' ' remain.
std::string fold(std::string_view utf8);

LetterCounts count_letters(std::string_view utf8);

// Maximal runs of a-z in fold(utf8).
std::vector<std::string> tokenize(std::string_view utf8);

inline bool is_letter(char c) { return c >= 'a' && c <= 'z'; }

}  // namespace ldscore::text
