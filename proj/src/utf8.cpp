#include "indicmt/utf8.hpp"

#include "indicmt/error.hpp"

namespace indicmt {

namespace {

inline bool is_continuation(unsigned char b) { return (b & 0xC0) == 0x80; }

} // namespace

bool utf8_decode(std::string_view text, std::vector<char32_t>& out,
                 std::size_t* error_offset) {
    out.clear();
    out.reserve(text.size());
    std::size_t i = 0;
    const auto fail = [&](std::size_t at) {
        if (error_offset) *error_offset = at;
        return false;
    };
    while (i < text.size()) {
        const unsigned char b0 = static_cast<unsigned char>(text[i]);
        if (b0 < 0x80) {
            out.push_back(b0);
            ++i;
            continue;
        }
        int len;
        char32_t cp;
        if ((b0 & 0xE0) == 0xC0) {
            len = 2;
            cp = b0 & 0x1F;
        } else if ((b0 & 0xF0) == 0xE0) {
            len = 3;
            cp = b0 & 0x0F;
        } else if ((b0 & 0xF8) == 0xF0) {
            len = 4;
            cp = b0 & 0x07;
        } else {
            return fail(i);
        }
        if (i + len > text.size()) return fail(i);
        for (int k = 1; k < len; ++k) {
            const unsigned char bk = static_cast<unsigned char>(text[i + k]);
            if (!is_continuation(bk)) return fail(i);
            cp = (cp << 6) | (bk & 0x3F);
        }
        static constexpr char32_t kMinByLen[5] = {0, 0, 0x80, 0x800, 0x10000};
        if (cp < kMinByLen[len]) return fail(i);                  // overlong
        if (cp >= 0xD800 && cp <= 0xDFFF) return fail(i);         // surrogate
        if (cp > 0x10FFFF) return fail(i);
        out.push_back(cp);
        i += len;
    }
    return true;
}

std::vector<char32_t> utf8_decode_or_throw(std::string_view text,
                                           std::size_t base_offset) {
    std::vector<char32_t> out;
    std::size_t at = 0;
    if (!utf8_decode(text, out, &at)) {
        raise("corpus.Utf8Error",
              "invalid UTF-8 at byte offset " + std::to_string(base_offset + at));
    }
    return out;
}

void utf8_append(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::string utf8_encode(const std::vector<char32_t>& codepoints) {
    std::string out;
    out.reserve(codepoints.size() * 3);
    for (char32_t cp : codepoints) utf8_append(out, cp);
    return out;
}

} // namespace indicmt
