#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "indicmt/corpus.hpp"
#include "indicmt/unicode.hpp"

namespace indicmt {

// Fixed-offset mapping between two layout-parallel Brahmi blocks. A source
// codepoint maps only when both it and its offset image are assigned
// characters; explicit exceptions override the offset rule (nullopt means
// "no counterpart", forcing pass-through).
struct ScriptMap {
    const BrahmiBlock* from;
    const BrahmiBlock* to;
    std::map<char32_t, std::optional<char32_t>> exceptions;

    // Mapped codepoint, or nullopt when the character passes through.
    std::optional<char32_t> map_codepoint(char32_t cp) const;
};

// Throws translit.UnsupportedScriptPair for Latin/Arabic-script languages
// (en, ur, sd) and for identical scripts that are distinct languages is fine.
ScriptMap make_script_map(Lang from, Lang to);

struct TransliterationResult {
    // Ranked candidates, best first. The rule-based mapper is
    // deterministic, so there is exactly one candidate with likelihood 1.
    std::vector<std::pair<std::string, double>> candidates;
    std::size_t unmapped_count = 0;

    const std::string& best() const { return candidates.front().first; }
};

TransliterationResult transliterate(const std::string& text, Lang from, Lang to);

struct LanguageGroup {
    char name; // 'A' (Indo-Aryan) or 'B' (Dravidian)
    std::set<Lang> members;
};

// Relatedness groups; en (and as/ne/si) belong to neither.
std::optional<LanguageGroup> group_of(Lang lang);

// Appends `high` to `low` with high's target side transliterated into
// low's target script. Both corpora must share the source language and the
// targets must be related. The result carries low's language codes and has
// exactly |low| + |high| pairs; `low` itself is never modified.
ParallelCorpus augment_related(const ParallelCorpus& low, const ParallelCorpus& high);

} // namespace indicmt
