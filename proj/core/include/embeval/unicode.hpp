#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace embeval::unicode {

// UTF-8 <-> code points. Invalid sequences decode to U+FFFD.
std::u32string decode(std::string_view utf8);
std::string encode(std::u32string_view text);
void append_utf8(std::string& out, char32_t cp);

// Number of Unicode scalar values in a UTF-8 string.
std::size_t length(std::string_view utf8);

// Character classes and simple case mapping backed by the C.UTF-8 locale.
bool is_letter(char32_t cp);
bool is_upper(char32_t cp);
bool is_lower(char32_t cp);
bool is_space(char32_t cp);
char32_t to_lower(char32_t cp);

std::string to_lower(std::string_view utf8);

// Splits on any run of Unicode whitespace; never yields empty pieces.
std::vector<std::string> split_whitespace(std::string_view utf8);

std::string_view trim(std::string_view s);

bool contains_whitespace(std::string_view utf8);

}  // namespace embeval::unicode
