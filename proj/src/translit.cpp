#include "indicmt/translit.hpp"

#include <string>

#include "indicmt/error.hpp"
#include "indicmt/utf8.hpp"

namespace indicmt {

namespace {

inline bool bit(const std::array<std::uint64_t, 2>& words, unsigned idx) {
    return (words[idx >> 6] >> (idx & 63)) & 1u;
}

} // namespace

std::optional<char32_t> ScriptMap::map_codepoint(char32_t cp) const {
    if (auto it = exceptions.find(cp); it != exceptions.end()) return it->second;
    if (cp < from->start || cp >= from->start + 0x80) return std::nullopt;
    const unsigned idx = static_cast<unsigned>(cp - from->start);
    if (!bit(from->assigned, idx)) return std::nullopt;
    if (!bit(to->assigned, idx)) return std::nullopt; // no counterpart
    return to->start + idx;
}

ScriptMap make_script_map(Lang from, Lang to) {
    const BrahmiBlock* f = brahmi_block_of(script_of(from));
    const BrahmiBlock* t = brahmi_block_of(script_of(to));
    if (!f || !t) {
        raise("translit.UnsupportedScriptPair",
              std::string(lang_code(from)) + "->" + std::string(lang_code(to)) +
                  ": offset mapping requires Brahmi-derived scripts on both sides");
    }
    return {f, t, {}};
}

TransliterationResult transliterate(const std::string& text, Lang from, Lang to) {
    const ScriptMap map = make_script_map(from, to);
    const auto cps = utf8_decode_or_throw(text);
    TransliterationResult result;
    std::string out;
    out.reserve(text.size());
    for (char32_t cp : cps) {
        if (auto mapped = map.map_codepoint(cp)) {
            utf8_append(out, *mapped);
        } else {
            ++result.unmapped_count;
            utf8_append(out, cp);
        }
    }
    result.candidates.emplace_back(std::move(out), 1.0);
    return result;
}

std::optional<LanguageGroup> group_of(Lang lang) {
    static const LanguageGroup kGroupA{
        'A', {Lang::hi, Lang::ur, Lang::pa, Lang::gu, Lang::mr, Lang::or_, Lang::bn, Lang::sd}};
    static const LanguageGroup kGroupB{'B', {Lang::te, Lang::ta, Lang::kn, Lang::ml}};
    if (kGroupA.members.count(lang)) return kGroupA;
    if (kGroupB.members.count(lang)) return kGroupB;
    return std::nullopt;
}

ParallelCorpus augment_related(const ParallelCorpus& low, const ParallelCorpus& high) {
    if (low.source_lang != high.source_lang) {
        raise("translit.GroupMismatch", "corpora must share the source language");
    }
    const auto gl = group_of(low.target_lang);
    const auto gh = group_of(high.target_lang);
    if (!gl || !gh || gl->name != gh->name) {
        raise("translit.GroupMismatch",
              std::string(lang_code(low.target_lang)) + " and " +
                  std::string(lang_code(high.target_lang)) +
                  " are not in the same relatedness group");
    }
    // Fails fast on unsupported scripts (e.g. ur/sd) before any copying.
    make_script_map(high.target_lang, low.target_lang);

    ParallelCorpus out;
    out.source_lang = low.source_lang;
    out.target_lang = low.target_lang;
    out.pairs = low.pairs;
    out.pairs.reserve(low.pairs.size() + high.pairs.size());
    std::uint64_t next_line = low.pairs.size();
    for (const auto& p : high.pairs) {
        auto result = transliterate(p.target, high.target_lang, low.target_lang);
        out.pairs.push_back({p.source, std::move(result.candidates.front().first),
                             out.source_lang, out.target_lang, ++next_line});
    }
    return out;
}

} // namespace indicmt
