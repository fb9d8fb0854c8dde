#include "indicmt/unicode.hpp"

namespace indicmt {

namespace {

inline bool bit(const std::array<std::uint64_t, 2>& words, unsigned idx) {
    return (words[idx >> 6] >> (idx & 63)) & 1u;
}

// Bitsets generated from the Unicode character database (13.0).
const BrahmiBlock kBrahmiBlocks[] = {
    {Script::Devanagari, 0x0900,
     {0xffffffffffffffffull, 0xffffffffffffffffull},
     {0xffffffffffffffffull, 0xfffe000fffffffffull},
     {0x0000000000000000ull, 0x0000ffc000000000ull}},
    {Script::Bengali, 0x0980,
     {0xf3c5fdfffff99fefull, 0x7fffffcfb080799full},
     {0xf3c5fdfffff99fefull, 0x5003000fb080799full},
     {0x0000000000000000ull, 0x0000ffc000000000ull}},
    {Script::Gurmukhi, 0x0A00,
     {0xd36dfdfffff987eeull, 0x007fffc05e023987ull},
     {0xd36dfdfffff987eeull, 0x003f00005e023987ull},
     {0x0000000000000000ull, 0x0000ffc000000000ull}},
    {Script::Gujarati, 0x0A80,
     {0xf3edfdfffffbbfeeull, 0xfe03ffcf00013bbfull},
     {0xf3edfdfffffbbfeeull, 0xfe00000f00013bbfull},
     {0x0000000000000000ull, 0x0000ffc000000000ull}},
    {Script::Oriya, 0x0B00,
     {0xf3edfdfffff99feeull, 0x00ffffcfb0e0399full},
     {0xf3edfdfffff99feeull, 0x0002000fb0e0399full},
     {0x0000000000000000ull, 0x0000ffc000000000ull}},
    {Script::Tamil, 0x0B80,
     {0xc3ffc718d63dc7ecull, 0x07ffffc000813dc7ull},
     {0xc3ffc718d63dc7ecull, 0x0000000000813dc7ull},
     {0x0000000000000000ull, 0x0000ffc000000000ull}},
    {Script::Telugu, 0x0C00,
     {0xe3fffdfffffddfffull, 0xff80ffcf07603ddfull},
     {0xe3fffdfffffddfffull, 0x0000000f07603ddfull},
     {0x0000000000000000ull, 0x0000ffc000000000ull}},
    {Script::Kannada, 0x0C80,
     {0xf3effdfffffddfffull, 0x0006ffcf40603ddfull},
     {0xf3effdfffffddfefull, 0x0006000f40603ddfull},
     {0x0000000000000000ull, 0x0000ffc000000000ull}},
    {Script::Malayalam, 0x0D00,
     {0xfffffffffffddfffull, 0xffffffcffff0fddfull},
     {0xfffffffffffddfffull, 0xfc00000f80f07ddfull},
     {0x0000000000000000ull, 0x0000ffc000000000ull}},
    {Script::Sinhala, 0x0D80,
     {0x2ffbfffffc7fffeeull, 0x001cffc0ff5f847full},
     {0x2ffbfffffc7fffeeull, 0x000c0000ff5f847full},
     {0x0000000000000000ull, 0x0000ffc000000000ull}},
};

// Arabic block U+0600..U+06FF (0x100 wide).
const std::uint64_t kArabicLetter[4] = {0xffffffff07ff0000ull, 0xffffc000ffffffffull,
                                        0xffffffffffffffffull, 0x9c00fdff9fefffffull};
const std::uint64_t kArabicDigit[4] = {0x0ull, 0x3ff00000000ull, 0x0ull,
                                       0x3ff000000000000ull};

// Letters in U+0000..U+024F (Basic Latin through Latin Extended-B).
const std::uint64_t kLatinLetter[10] = {
    0x0000000000000000ull, 0x07fffffe07fffffeull, 0x0420040000000000ull,
    0xff7fffffff7fffffull, 0xffffffffffffffffull, 0xffffffffffffffffull,
    0xffffffffffffffffull, 0xffffffffffffffffull, 0xffffffffffffffffull,
    0x000000000000ffffull};

// Ranges that are overwhelmingly punctuation, symbols or separators; a
// codepoint in one of these never counts as a letter of "Other".
bool in_symbol_range(char32_t cp) {
    return (cp >= 0x2000 && cp <= 0x206F)   // general punctuation (incl. ZWJ/ZWNJ)
           || (cp >= 0x2070 && cp <= 0x209F) // super/subscripts
           || (cp >= 0x20A0 && cp <= 0x20CF) // currency
           || (cp >= 0x2100 && cp <= 0x2BFF) // letterlike, arrows, math, box, misc
           || (cp >= 0x2E00 && cp <= 0x2E7F) // supplemental punctuation
           || (cp >= 0x3000 && cp <= 0x303F) // CJK symbols and punctuation
           || (cp >= 0xFE30 && cp <= 0xFE4F) // CJK compat forms
           || (cp >= 0xFF00 && cp <= 0xFF20) // fullwidth punctuation/digits
           || (cp >= 0x1F000 && cp <= 0x1FAFF); // emoji & friends
}

} // namespace

std::string_view script_name(Script s) {
    switch (s) {
        case Script::Devanagari: return "Devanagari";
        case Script::Bengali: return "Bengali";
        case Script::Gurmukhi: return "Gurmukhi";
        case Script::Gujarati: return "Gujarati";
        case Script::Oriya: return "Oriya";
        case Script::Tamil: return "Tamil";
        case Script::Telugu: return "Telugu";
        case Script::Kannada: return "Kannada";
        case Script::Malayalam: return "Malayalam";
        case Script::Sinhala: return "Sinhala";
        case Script::Arabic: return "Arabic";
        case Script::Latin: return "Latin";
        case Script::Other: return "Other";
    }
    return "Other";
}

const BrahmiBlock* brahmi_block_of(Script s) {
    for (const auto& b : kBrahmiBlocks)
        if (b.script == s) return &b;
    return nullptr;
}

const BrahmiBlock* brahmi_block_at(char32_t cp) {
    if (cp < 0x0900 || cp >= 0x0E00) return nullptr;
    const auto& b = kBrahmiBlocks[(cp - 0x0900) >> 7];
    return (cp >= b.start && cp < b.start + 0x80) ? &b : nullptr;
}

std::optional<Script> script_of_codepoint(char32_t cp) {
    if (cp <= 0x24F) {
        const unsigned idx = static_cast<unsigned>(cp);
        if ((kLatinLetter[idx >> 6] >> (idx & 63)) & 1u) return Script::Latin;
        return std::nullopt;
    }
    if (cp >= 0x0600 && cp <= 0x06FF) {
        const unsigned idx = static_cast<unsigned>(cp - 0x0600);
        if ((kArabicLetter[idx >> 6] >> (idx & 63)) & 1u) return Script::Arabic;
        return std::nullopt; // Arabic digits/punctuation carry no script vote
    }
    if (const BrahmiBlock* b = brahmi_block_at(cp)) {
        const unsigned idx = static_cast<unsigned>(cp - b->start);
        if (bit(b->letter, idx)) return b->script;
        return std::nullopt;
    }
    if (in_symbol_range(cp)) return std::nullopt;
    // Letters of scripts we do not track (Greek, CJK, ...) count as Other
    // so they still dilute the per-script fractions.
    return Script::Other;
}

bool is_letter(char32_t cp) { return script_of_codepoint(cp).has_value(); }

bool is_digit(char32_t cp) {
    if (cp >= '0' && cp <= '9') return true;
    if (cp >= 0x0600 && cp <= 0x06FF) {
        const unsigned idx = static_cast<unsigned>(cp - 0x0600);
        return (kArabicDigit[idx >> 6] >> (idx & 63)) & 1u;
    }
    if (const BrahmiBlock* b = brahmi_block_at(cp))
        return bit(b->digit, static_cast<unsigned>(cp - b->start));
    return false;
}

bool is_word_char(char32_t cp) { return is_letter(cp) || is_digit(cp); }

bool is_space(char32_t cp) {
    return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == 0x0B ||
           cp == 0x0C || cp == 0x00A0 || cp == 0x3000 ||
           (cp >= 0x2000 && cp <= 0x200A) || cp == 0x2028 || cp == 0x2029;
}

} // namespace indicmt
