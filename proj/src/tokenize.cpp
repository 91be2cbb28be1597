#include "fairaudit/tokenize.hpp"

namespace fairaudit {
namespace {

bool ascii_alnum(char32_t c) {
  return (c >= U'0' && c <= U'9') || (c >= U'a' && c <= U'z') ||
         (c >= U'A' && c <= U'Z');
}

bool unicode_space(char32_t c) {
  if (c == 0x0085 || c == 0x00A0 || c == 0x1680 || c == 0x2028 ||
      c == 0x2029 || c == 0x202F || c == 0x205F || c == 0x3000) {
    return true;
  }
  return c >= 0x2000 && c <= 0x200A;
}

bool unicode_punct(char32_t c) {
  if (c == 0x00D7 || c == 0x00F7) return true;          // multiply/divide signs
  if (c >= 0x00A1 && c <= 0x00BF) return true;          // Latin-1 punctuation
  if (c >= 0x2010 && c <= 0x206F) return true;          // general punctuation
  if (c >= 0x3001 && c <= 0x303F) return true;          // CJK punctuation
  if (c >= 0xFE50 && c <= 0xFE6F) return true;          // small form variants
  if (c >= 0xFF01 && c <= 0xFF0F) return true;          // fullwidth ASCII punct
  if (c >= 0xFF1A && c <= 0xFF20) return true;
  if (c >= 0xFF3B && c <= 0xFF40) return true;
  if (c >= 0xFF5B && c <= 0xFF65) return true;
  return false;
}

// Word characters: ASCII alphanumerics plus any codepoint >= 0x80 that is
// not whitespace, punctuation, or a C1 control. Apostrophes are decided
// by context in the tokenizer loop.
bool word_cp(char32_t c) {
  if (c < 0x80) return ascii_alnum(c);
  if (c <= 0x9F) return false;
  return !unicode_space(c) && !unicode_punct(c);
}

// Decodes the UTF-8 sequence starting at byte i. Malformed bytes decode
// as single-byte codepoints so tokenization never fails on binary junk.
char32_t decode(std::string_view s, std::size_t i, std::size_t* len) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  *len = 1;
  if (b0 < 0x80) return b0;
  int extra = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    extra = 1;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    extra = 2;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    extra = 3;
    cp = b0 & 0x07;
  } else {
    return b0;
  }
  if (i + extra >= s.size()) return b0;
  for (int k = 1; k <= extra; ++k) {
    const auto bk = static_cast<unsigned char>(s[i + k]);
    if ((bk & 0xC0) != 0x80) return b0;
    cp = (cp << 6) | (bk & 0x3F);
  }
  *len = 1 + extra;
  return cp;
}

char32_t lower_cp(char32_t c) {
  if (c >= U'A' && c <= U'Z') return c + 32;
  if (c >= 0x00C0 && c <= 0x00DE && c != 0x00D7) return c + 32;  // Latin-1
  return c;
}

void append_cp(std::string* out, char32_t c) {
  if (c < 0x80) {
    out->push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out->push_back(static_cast<char>(0xC0 | (c >> 6)));
    out->push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else if (c < 0x10000) {
    out->push_back(static_cast<char>(0xE0 | (c >> 12)));
    out->push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else {
    out->push_back(static_cast<char>(0xF0 | (c >> 18)));
    out->push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (c & 0x3F)));
  }
}

constexpr char32_t kApostrophe = 0x27;
constexpr char32_t kRightSingleQuote = 0x2019;

}  // namespace

std::string to_lower(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t len = 0;
    const char32_t c = decode(text, i, &len);
    append_cp(&out, lower_cp(c));
    i += len;
  }
  return out;
}

std::vector<Token> tokenize_with_spans(std::string_view text) {
  std::vector<Token> tokens;
  Token cur;
  bool open = false;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t len = 0;
    const char32_t c = decode(text, i, &len);
    bool is_word;
    if (c == kApostrophe || c == kRightSingleQuote) {
      std::size_t next_len = 0;
      const char32_t next = (i + len < text.size())
                                ? decode(text, i + len, &next_len)
                                : 0;
      is_word = open && word_cp(next);
    } else {
      is_word = word_cp(c);
    }
    if (is_word) {
      if (!open) {
        cur = Token{};
        cur.begin = i;
        open = true;
      }
      const char32_t norm = (c == kRightSingleQuote) ? kApostrophe : c;
      append_cp(&cur.text, lower_cp(norm));
      cur.end = i + len;
    } else if (open) {
      tokens.push_back(std::move(cur));
      open = false;
    }
    i += len;
  }
  if (open) tokens.push_back(std::move(cur));
  return tokens;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : tokenize_with_spans(text)) out.push_back(std::move(t.text));
  return out;
}

}  // namespace fairaudit
