#ifndef MGTD_UNICODE_HPP
#define MGTD_UNICODE_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mgtd {

// Strict UTF-8 decode: rejects overlong forms, surrogates, truncated
// sequences and code points beyond U+10FFFF. Throws std::runtime_error
// with the byte offset of the first bad sequence.
std::vector<char32_t> utf8_decode(std::string_view s);

std::string utf8_encode(const std::vector<char32_t>& cps);
void utf8_append(std::string& out, char32_t cp);

bool is_valid_utf8(std::string_view s);

// Unicode NFC normalization of a UTF-8 string.
std::string nfc_normalize(std::string_view s);

// Character classes used by the tokenizer and cleaner.
bool is_control(char32_t cp);     // general category Cc
bool is_whitespace(char32_t cp);  // White_Space property
bool is_alnum(char32_t cp);       // letters and digits
bool is_digit(char32_t cp);       // decimal digits (Nd)
char32_t to_lower(char32_t cp);   // simple one-to-one lowercase mapping

std::string lowercase(std::string_view s);

}  // namespace mgtd

#endif  // MGTD_UNICODE_HPP
