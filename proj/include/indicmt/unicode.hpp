#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace indicmt {

// Writing systems relevant to the supported languages. "Other" collects
// letters of unrecognized scripts so fractions still sum to <= 1.
enum class Script : std::uint8_t {
    Devanagari,
    Bengali,
    Gurmukhi,
    Gujarati,
    Oriya,
    Tamil,
    Telugu,
    Kannada,
    Malayalam,
    Sinhala,
    Arabic,
    Latin,
    Other,
};

constexpr int kNumScripts = 13;

std::string_view script_name(Script s);

// Brahmi-derived blocks are 0x80 codepoints wide and layout-parallel,
// which is what makes offset transliteration work.
struct BrahmiBlock {
    Script script;
    char32_t start;                      // block start, width 0x80
    std::array<std::uint64_t, 2> assigned; // codepoint exists in Unicode
    std::array<std::uint64_t, 2> letter;   // general category L* or M*
    std::array<std::uint64_t, 2> digit;    // general category Nd
};

const BrahmiBlock* brahmi_block_of(Script s);
const BrahmiBlock* brahmi_block_at(char32_t cp);

// Script membership of a single codepoint, nullopt for characters that
// belong to no recognized script (ASCII digits, punctuation, spaces, ...).
std::optional<Script> script_of_codepoint(char32_t cp);

// Character classes used by filtering and the BLEU tokenizer. "Letter"
// includes combining marks (an Indic matra or virama counts toward its
// script), never digits or punctuation.
bool is_letter(char32_t cp);
bool is_digit(char32_t cp);
bool is_word_char(char32_t cp); // letter or digit
bool is_space(char32_t cp);

} // namespace indicmt
