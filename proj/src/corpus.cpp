#include "indicmt/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "indicmt/error.hpp"
#include "indicmt/utf8.hpp"

#include "json.hpp"

namespace indicmt {

namespace {

struct LangEntry {
    Lang lang;
    const char* code;
    Script script;
};

const LangEntry kLangs[] = {
    {Lang::en, "en", Script::Latin},     {Lang::bn, "bn", Script::Bengali},
    {Lang::gu, "gu", Script::Gujarati},  {Lang::hi, "hi", Script::Devanagari},
    {Lang::kn, "kn", Script::Kannada},   {Lang::ml, "ml", Script::Malayalam},
    {Lang::mr, "mr", Script::Devanagari},{Lang::or_, "or", Script::Oriya},
    {Lang::pa, "pa", Script::Gurmukhi},  {Lang::ta, "ta", Script::Tamil},
    {Lang::te, "te", Script::Telugu},    {Lang::as_, "as", Script::Bengali},
    {Lang::ur, "ur", Script::Arabic},    {Lang::ne, "ne", Script::Devanagari},
    {Lang::si, "si", Script::Sinhala},   {Lang::sd, "sd", Script::Arabic},
};

// Reads all lines, validating UTF-8 and reporting absolute byte offsets.
// A trailing \r is stripped so CRLF input loads as the same corpus.
std::vector<std::string> read_validated_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise("corpus.FileNotFound", "cannot open " + path);
    std::vector<std::string> lines;
    std::string line;
    std::size_t byte_offset = 0;
    while (std::getline(in, line)) {
        const std::size_t raw_len = line.size() + 1; // + the consumed '\n'
        if (!line.empty() && line.back() == '\r') line.pop_back();
        utf8_decode_or_throw(line, byte_offset);
        lines.push_back(line);
        byte_offset += raw_len;
    }
    return lines;
}

} // namespace

Lang parse_lang(std::string_view code) {
    for (const auto& e : kLangs)
        if (code == e.code) return e.lang;
    raise("corpus.UnknownLang", "unknown language code '" + std::string(code) + "'");
}

std::string_view lang_code(Lang lang) {
    return kLangs[static_cast<int>(lang)].code;
}

Script script_of(Lang lang) {
    return kLangs[static_cast<int>(lang)].script;
}

std::string_view filter_rule_name(FilterRule rule) {
    switch (rule) {
        case FilterRule::EmptySide: return "EmptySide";
        case FilterRule::LengthBounds: return "LengthBounds";
        case FilterRule::LengthRatio: return "LengthRatio";
        case FilterRule::ScriptMismatch: return "ScriptMismatch";
        case FilterRule::Duplicate: return "Duplicate";
    }
    return "?";
}

std::string FilterReport::to_json() const {
    nlohmann::json j;
    j["input_pairs"] = input_pairs;
    j["retained_pairs"] = retained_pairs;
    j["rejected_by_rule"] = rejected_by_rule;
    j["retained_fraction"] = retained_fraction;
    return j.dump(2) + "\n";
}

ParallelCorpus load_parallel(const std::string& source_path,
                             const std::string& target_path,
                             Lang source_lang, Lang target_lang) {
    auto src = read_validated_lines(source_path);
    auto tgt = read_validated_lines(target_path);
    if (src.size() != tgt.size()) {
        raise("corpus.LineCountMismatch",
              source_path + " has " + std::to_string(src.size()) + " lines, " +
                  target_path + " has " + std::to_string(tgt.size()));
    }
    ParallelCorpus corpus;
    corpus.source_lang = source_lang;
    corpus.target_lang = target_lang;
    corpus.pairs.reserve(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) {
        corpus.pairs.push_back({std::move(src[i]), std::move(tgt[i]), source_lang,
                                target_lang, i + 1});
    }
    return corpus;
}

ParallelCorpus load_parallel_tsv(const std::string& path, Lang source_lang,
                                 Lang target_lang) {
    auto lines = read_validated_lines(path);
    ParallelCorpus corpus;
    corpus.source_lang = source_lang;
    corpus.target_lang = target_lang;
    corpus.pairs.reserve(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto tab = lines[i].find('\t');
        if (tab == std::string::npos) {
            raise("corpus.TsvFormat",
                  path + ":" + std::to_string(i + 1) + ": missing TAB separator");
        }
        corpus.pairs.push_back({lines[i].substr(0, tab), lines[i].substr(tab + 1),
                                source_lang, target_lang, i + 1});
    }
    return corpus;
}

MonoCorpus load_mono(const std::string& path, Lang lang, bool drop_empty) {
    MonoCorpus corpus;
    corpus.lang = lang;
    for (auto& line : read_validated_lines(path)) {
        if (drop_empty && trim(line).empty()) continue;
        corpus.lines.push_back(std::move(line));
    }
    return corpus;
}

void write_lines(const std::vector<std::string>& lines, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise("corpus.FileNotFound", "cannot write " + path);
    for (const auto& line : lines) out << line << '\n';
}

void write_parallel(const ParallelCorpus& corpus, const std::string& source_path,
                    const std::string& target_path) {
    std::ofstream src(source_path, std::ios::binary), tgt(target_path, std::ios::binary);
    if (!src || !tgt) raise("corpus.FileNotFound", "cannot write corpus files");
    for (const auto& p : corpus.pairs) {
        src << p.source << '\n';
        tgt << p.target << '\n';
    }
}

std::vector<std::string> read_lines(const std::string& path) {
    return read_validated_lines(path);
}

std::string trim(std::string_view text) {
    std::size_t b = 0, e = text.size();
    while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
    return std::string(text.substr(b, e - b));
}

std::vector<std::string> split_whitespace(std::string_view text) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        if (j > i) tokens.emplace_back(text.substr(i, j - i));
        i = j;
    }
    return tokens;
}

std::map<std::string, double> classify_script(std::string_view text) {
    std::vector<char32_t> cps;
    if (!utf8_decode(text, cps)) cps.clear(); // unclassifiable bytes: no votes
    std::array<std::size_t, kNumScripts> counts{};
    std::size_t total = 0;
    for (char32_t cp : cps) {
        if (auto s = script_of_codepoint(cp)) {
            ++counts[static_cast<int>(*s)];
            ++total;
        }
    }
    std::map<std::string, double> fractions;
    if (total == 0) return fractions;
    for (int i = 0; i < kNumScripts; ++i) {
        if (counts[i] > 0)
            fractions[std::string(script_name(static_cast<Script>(i)))] =
                static_cast<double>(counts[i]) / static_cast<double>(total);
    }
    return fractions;
}

namespace {

// Script conformance of one side. With no letters at all there is no
// evidence either way, so the rule passes (numeric/symbolic lines are fine).
bool script_matches(const std::string& text, Lang lang, double min_fraction) {
    const Script expected = script_of(lang);
    std::vector<char32_t> cps;
    if (!utf8_decode(text, cps)) return false;
    std::size_t total = 0, hits = 0;
    for (char32_t cp : cps) {
        if (auto s = script_of_codepoint(cp)) {
            ++total;
            if (*s == expected) ++hits;
        }
    }
    if (total == 0) return true;
    return static_cast<double>(hits) / static_cast<double>(total) >= min_fraction;
}

} // namespace

std::optional<FilterRule> filter_pair(const SentencePair& pair, const FilterConfig& cfg) {
    const std::string src = trim(pair.source);
    const std::string tgt = trim(pair.target);
    if (src.empty() || tgt.empty()) return FilterRule::EmptySide;

    const std::size_t len_s = split_whitespace(src).size();
    const std::size_t len_t = split_whitespace(tgt).size();
    if (len_s < cfg.min_len || len_s > cfg.max_len || len_t < cfg.min_len ||
        len_t > cfg.max_len)
        return FilterRule::LengthBounds;

    const double ratio = static_cast<double>(std::max(len_s, len_t)) /
                         static_cast<double>(std::min(len_s, len_t));
    if (ratio > cfg.max_len_ratio) return FilterRule::LengthRatio;

    if (!script_matches(pair.source, pair.source_lang, cfg.expected_script_fraction) ||
        !script_matches(pair.target, pair.target_lang, cfg.expected_script_fraction))
        return FilterRule::ScriptMismatch;

    return std::nullopt;
}

std::pair<ParallelCorpus, FilterReport>
filter_corpus(const ParallelCorpus& corpus, const FilterConfig& cfg, int workers) {
    const std::size_t n = corpus.pairs.size();
    std::vector<std::optional<FilterRule>> verdicts(n);

    if (workers <= 1 || n < 64) {
        for (std::size_t i = 0; i < n; ++i)
            verdicts[i] = filter_pair(corpus.pairs[i], cfg);
    } else {
        const int t = std::min<int>(workers, static_cast<int>(n));
        std::vector<std::thread> pool;
        pool.reserve(t);
        for (int w = 0; w < t; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < n; i += t)
                    verdicts[i] = filter_pair(corpus.pairs[i], cfg);
            });
        }
        for (auto& th : pool) th.join();
    }

    // Duplicate detection is inherently sequential and runs after the pure
    // rules so attribution is identical for any worker count.
    ParallelCorpus kept;
    kept.source_lang = corpus.source_lang;
    kept.target_lang = corpus.target_lang;
    FilterReport report;
    report.input_pairs = n;
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < n; ++i) {
        std::optional<FilterRule> verdict = verdicts[i];
        if (!verdict && cfg.drop_duplicates) {
            std::string key = corpus.pairs[i].source + '\x1f' + corpus.pairs[i].target;
            if (!seen.insert(std::move(key)).second) verdict = FilterRule::Duplicate;
        }
        if (verdict) {
            ++report.rejected_by_rule[std::string(filter_rule_name(*verdict))];
        } else {
            kept.pairs.push_back(corpus.pairs[i]);
        }
    }
    report.retained_pairs = kept.pairs.size();
    report.retained_fraction =
        n == 0 ? 1.0 : static_cast<double>(report.retained_pairs) / static_cast<double>(n);
    return {std::move(kept), report};
}

} // namespace indicmt
