#include "mgtd/preprocess.hpp"

#include <stdexcept>

#include "mgtd/unicode.hpp"

namespace mgtd {

PreprocessVersion parse_preprocess_version(std::string_view name) {
  if (name == "none") return PreprocessVersion::None;
  if (name == "v1") return PreprocessVersion::V1;
  if (name == "v2") return PreprocessVersion::V2;
  throw std::runtime_error("unknown preprocess version '" + std::string(name) +
                           "' (expected none, v1 or v2)");
}

std::string preprocess_version_name(PreprocessVersion v) {
  switch (v) {
    case PreprocessVersion::None: return "none";
    case PreprocessVersion::V1: return "v1";
    case PreprocessVersion::V2: return "v2";
  }
  return "none";
}

std::string clean_heuristic(std::string_view text) {
  const auto cps = utf8_decode(text);
  std::string filtered;
  filtered.reserve(text.size());
  bool pending_space = false;
  bool any_output = false;
  for (char32_t cp : cps) {
    if (is_control(cp) && cp != U'\n' && cp != U'\t') continue;
    if (is_whitespace(cp)) {
      pending_space = true;
      continue;
    }
    if (pending_space && any_output) filtered.push_back(' ');
    pending_space = false;
    any_output = true;
    utf8_append(filtered, cp);
  }
  // Normalize last: dropping characters between a base and its combining
  // marks can expose sequences that NFC would compose.
  return nfc_normalize(filtered);
}

std::string remove_subwords(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t sep = text.find(' ', pos);
    if (sep == std::string_view::npos) sep = text.size();
    const std::string_view token = text.substr(pos, sep - pos);
    if (!token.empty()) {
      const auto cps = utf8_decode(token);
      bool keep = true;
      if (cps.size() == 1 && !is_digit(cps[0])) {
        keep = false;
      } else {
        bool has_alnum = false;
        for (char32_t cp : cps) {
          if (is_alnum(cp)) {
            has_alnum = true;
            break;
          }
        }
        keep = has_alnum;
      }
      if (keep) {
        if (!out.empty()) out.push_back(' ');
        out.append(token);
      }
    }
    if (sep == text.size()) break;
    pos = sep + 1;
  }
  return out;
}

std::string preprocess(std::string_view text, PreprocessVersion version) {
  switch (version) {
    case PreprocessVersion::None: return std::string(text);
    case PreprocessVersion::V2: return clean_heuristic(text);
    case PreprocessVersion::V1: return remove_subwords(clean_heuristic(text));
  }
  return std::string(text);
}

}  // namespace mgtd
