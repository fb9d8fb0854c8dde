#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace indicmt {

// Decodes UTF-8 into codepoints. Rejects overlong forms, surrogates and
// values above U+10FFFF; on failure reports the byte offset of the bad
// sequence through `error_offset` and returns false.
bool utf8_decode(std::string_view text, std::vector<char32_t>& out,
                 std::size_t* error_offset = nullptr);

// Throwing variant; error code "corpus.Utf8Error" with the byte offset.
std::vector<char32_t> utf8_decode_or_throw(std::string_view text,
                                           std::size_t base_offset = 0);

std::string utf8_encode(const std::vector<char32_t>& codepoints);
void utf8_append(std::string& out, char32_t cp);

} // namespace indicmt
