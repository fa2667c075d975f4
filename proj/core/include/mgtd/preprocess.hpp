#ifndef MGTD_PREPROCESS_HPP
#define MGTD_PREPROCESS_HPP

#include <string>
#include <string_view>

namespace mgtd {

// The two cleaning regimes plus a passthrough.
// V1 = heuristic cleaning followed by sub-word removal, V2 = heuristics only.
enum class PreprocessVersion { None, V1, V2 };

PreprocessVersion parse_preprocess_version(std::string_view name);
std::string preprocess_version_name(PreprocessVersion v);

// Heuristic cleaning: NFC normalization, control characters (category Cc,
// except '\n' and '\t' which count as whitespace) removed, whitespace runs
// collapsed to one space, ends trimmed. Idempotent.
std::string clean_heuristic(std::string_view text);

// Drops length-1 tokens that are not digits and tokens with no alphanumeric
// character. Input is expected to be heuristic-cleaned (single spaces).
std::string remove_subwords(std::string_view text);

std::string preprocess(std::string_view text, PreprocessVersion version);

}  // namespace mgtd

#endif  // MGTD_PREPROCESS_HPP
