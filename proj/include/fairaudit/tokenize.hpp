#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace fairaudit {

// A lowercased word token plus its byte span [begin, end) in the source.
struct Token {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Lowercases ASCII letters and the Latin-1 supplement range; other bytes
// pass through unchanged.
std::string to_lower(std::string_view text);

// Splits text into lowercased word tokens. Separators are whitespace and
// punctuation (ASCII plus the common Unicode whitespace/punctuation
// ranges). Apostrophes between letters stay word-internal, so
// contractions like "don't" survive as single tokens. Multi-byte UTF-8
// sequences outside the punctuation ranges count as word characters.
std::vector<std::string> tokenize(std::string_view text);

// Same segmentation, with byte spans kept for in-place replacement.
std::vector<Token> tokenize_with_spans(std::string_view text);

}  // namespace fairaudit
