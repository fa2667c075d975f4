#include <doctest.h>

#include <random>
#include <sstream>
#include <vector>

#include "mgtd/preprocess.hpp"
#include "mgtd/unicode.hpp"

using namespace mgtd;

TEST_CASE("clean_heuristic applies the cleaning rules") {
  CHECK(clean_heuristic(std::string("a\0  b\n\nc ", 9)) == "a b c");
  CHECK(clean_heuristic("") == "");
  CHECK(clean_heuristic("abc def") == "abc def");
  CHECK(clean_heuristic("a\tb") == "a b");
  CHECK(clean_heuristic("  lead and trail  ") == "lead and trail");
  // non-ASCII whitespace collapses too
  CHECK(clean_heuristic("a  b") == "a b");
  // \r is a control character, removed before whitespace handling
  CHECK(clean_heuristic("a\rb") == "ab");
  CHECK(clean_heuristic("a\r\nb") == "a b");
}

TEST_CASE("clean_heuristic normalizes to NFC") {
  const std::string decomposed = "étude";  // e + combining acute
  const std::string composed = "étude";
  CHECK(clean_heuristic(decomposed) == composed);
  // dropping a control between base and mark exposes a composable pair
  const std::string split_pair = std::string("e́x");
  CHECK(clean_heuristic(split_pair) == "éx");
}

TEST_CASE("remove_subwords drops short and symbol-only tokens") {
  CHECK(remove_subwords("a big ## dog 5") == "big dog 5");
  CHECK(remove_subwords("ok") == "ok");
  CHECK(remove_subwords("% ^ &") == "");
  CHECK(remove_subwords("") == "");
  // single non-ASCII letter is still a length-1 non-digit token
  CHECK(remove_subwords("é fine") == "fine");
  // mixed token with at least one alphanumeric survives
  CHECK(remove_subwords("c++ x") == "c++");
}

TEST_CASE("preprocess dispatches on the version") {
  CHECK(preprocess("a  big\tdog", PreprocessVersion::V2) == "a big dog");
  CHECK(preprocess("a  big\tdog", PreprocessVersion::V1) == "big dog");
  CHECK(preprocess("a  big\tdog", PreprocessVersion::None) == "a  big\tdog");
}

TEST_CASE("preprocess version names round-trip") {
  for (auto v : {PreprocessVersion::None, PreprocessVersion::V1, PreprocessVersion::V2})
    CHECK(parse_preprocess_version(preprocess_version_name(v)) == v);
  CHECK_THROWS(parse_preprocess_version("v3"));
}

namespace {

// Random code points across scripts, whitespace, controls and combining
// marks; excludes surrogates by construction.
std::string random_unicode_string(std::mt19937_64& rng) {
  static const std::vector<std::pair<char32_t, char32_t>> ranges = {
      {0x20, 0x7e},     {0x00, 0x1f},     {0x7f, 0x9f},     {0xa0, 0xff},
      {0x300, 0x36f},   {0x2000, 0x200d}, {0x4e00, 0x4eff}, {0x1f600, 0x1f64f},
      {0x410, 0x44f},   {0x3000, 0x3002},
  };
  const std::size_t len = rng() % 60;
  std::string out;
  for (std::size_t k = 0; k < len; ++k) {
    const auto& [lo, hi] = ranges[rng() % ranges.size()];
    utf8_append(out, lo + static_cast<char32_t>(rng() % (hi - lo + 1)));
  }
  return out;
}

std::vector<std::string> split_spaces(const std::string& s) {
  std::vector<std::string> tokens;
  std::istringstream in(s);
  std::string t;
  while (in >> t) tokens.push_back(t);
  return tokens;
}

bool is_subsequence(const std::vector<std::string>& small, const std::vector<std::string>& big) {
  std::size_t j = 0;
  for (const auto& t : big)
    if (j < small.size() && small[j] == t) ++j;
  return j == small.size();
}

}  // namespace

TEST_CASE("preprocess properties hold on random unicode strings") {
  std::mt19937_64 rng(20240817);
  for (int iter = 0; iter < 500; ++iter) {
    const std::string s = random_unicode_string(rng);
    for (auto v : {PreprocessVersion::None, PreprocessVersion::V1, PreprocessVersion::V2}) {
      const std::string once = preprocess(s, v);
      CHECK(preprocess(once, v) == once);
      if (v == PreprocessVersion::None) continue;
      CHECK(once.find("  ") == std::string::npos);
      if (!once.empty()) {
        CHECK(once.front() != ' ');
        CHECK(once.back() != ' ');
      }
    }
    const auto v1_tokens = split_spaces(preprocess(s, PreprocessVersion::V1));
    const auto v2_tokens = split_spaces(preprocess(s, PreprocessVersion::V2));
    CHECK(is_subsequence(v1_tokens, v2_tokens));
  }
}
