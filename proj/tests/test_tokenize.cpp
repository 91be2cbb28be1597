#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fairaudit/tokenize.hpp>

using namespace fairaudit;

TEST_CASE("splits on whitespace and punctuation, lowercases") {
  CHECK(tokenize("Hello, World!") == std::vector<std::string>{"hello", "world"});
  CHECK(tokenize("a  b\tc\nd") == std::vector<std::string>{"a", "b", "c", "d"});
  CHECK(tokenize("one-two.three") ==
        std::vector<std::string>{"one", "two", "three"});
}

TEST_CASE("empty and separator-only input") {
  CHECK(tokenize("").empty());
  CHECK(tokenize("  ,.;:!?  ").empty());
}

TEST_CASE("contractions keep their apostrophe") {
  CHECK(tokenize("don't stop") == std::vector<std::string>{"don't", "stop"});
  CHECK(tokenize("she said 'hello'") ==
        std::vector<std::string>{"she", "said", "hello"});
  SUBCASE("leading or trailing apostrophes are separators") {
    CHECK(tokenize("'tis") == std::vector<std::string>{"tis"});
    CHECK(tokenize("dogs'") == std::vector<std::string>{"dogs"});
  }
}

TEST_CASE("digits count as word characters") {
  CHECK(tokenize("top10 items") == std::vector<std::string>{"top10", "items"});
}

TEST_CASE("multi-byte sequences survive as word characters") {
  const auto tokens = tokenize("caf\xC3\xA9 noir");
  REQUIRE(tokens.size() == 2);
  CHECK(tokens[1] == "noir");
}

TEST_CASE("to_lower maps ASCII letters only as expected") {
  CHECK(to_lower("MiXeD CaSe 123") == "mixed case 123");
  CHECK(to_lower("") == "");
}

TEST_CASE("spans point back at the source bytes") {
  const std::string text = "Alice met BOB.";
  const auto tokens = tokenize_with_spans(text);
  REQUIRE(tokens.size() == 3);
  for (const auto& tok : tokens) {
    REQUIRE(tok.end <= text.size());
    REQUIRE(tok.begin < tok.end);
    CHECK(to_lower(text.substr(tok.begin, tok.end - tok.begin)) == tok.text);
  }
  CHECK(tokens[0].text == "alice");
  CHECK(tokens[2].text == "bob");
}

TEST_CASE("span tokenization agrees with plain tokenization") {
  const std::string samples[] = {
      "The QUICK brown-fox, jumps; over don't stop!",
      "x", "", "a'b c'd", "  spaced   out  "};
  for (const auto& s : samples) {
    const auto plain = tokenize(s);
    const auto spanned = tokenize_with_spans(s);
    REQUIRE(plain.size() == spanned.size());
    for (std::size_t i = 0; i < plain.size(); ++i)
      CHECK(plain[i] == spanned[i].text);
  }
}
