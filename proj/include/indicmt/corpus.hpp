#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "indicmt/unicode.hpp"

namespace indicmt {

// The sixteen languages the toolkit knows about. The set is closed:
// anything else is rejected at parse time.
enum class Lang : std::uint8_t {
    en, bn, gu, hi, kn, ml, mr, or_, pa, ta, te, as_, ur, ne, si, sd
};

constexpr int kNumLangs = 16;

Lang parse_lang(std::string_view code); // throws corpus.UnknownLang
std::string_view lang_code(Lang lang);
Script script_of(Lang lang);

struct SentencePair {
    std::string source;
    std::string target;
    Lang source_lang = Lang::en;
    Lang target_lang = Lang::en;
    std::uint64_t line_no = 0; // 1-based position in the input file
};

struct ParallelCorpus {
    std::vector<SentencePair> pairs;
    Lang source_lang = Lang::en;
    Lang target_lang = Lang::en;

    std::size_t size() const { return pairs.size(); }
};

struct MonoCorpus {
    std::vector<std::string> lines;
    Lang lang = Lang::en;
};

struct FilterConfig {
    std::size_t max_len = 250;   // whitespace tokens
    std::size_t min_len = 1;
    double max_len_ratio = 3.0;
    double expected_script_fraction = 0.5;
    bool drop_duplicates = true;
};

// Rule names appear verbatim in reports, so they are part of the file format.
enum class FilterRule { EmptySide, LengthBounds, LengthRatio, ScriptMismatch, Duplicate };

std::string_view filter_rule_name(FilterRule rule);

struct FilterReport {
    std::size_t input_pairs = 0;
    std::size_t retained_pairs = 0;
    std::map<std::string, std::size_t> rejected_by_rule;
    double retained_fraction = 1.0;

    std::string to_json() const;
};

// Two aligned one-sentence-per-line files. Throws corpus.LineCountMismatch,
// corpus.Utf8Error (with byte offset) or corpus.UnknownLang.
ParallelCorpus load_parallel(const std::string& source_path,
                             const std::string& target_path,
                             Lang source_lang, Lang target_lang);

// Single-file alternative: "source<TAB>target" per line.
ParallelCorpus load_parallel_tsv(const std::string& path, Lang source_lang,
                                 Lang target_lang);

MonoCorpus load_mono(const std::string& path, Lang lang, bool drop_empty = true);

void write_parallel(const ParallelCorpus& corpus, const std::string& source_path,
                    const std::string& target_path);
void write_lines(const std::vector<std::string>& lines, const std::string& path);
std::vector<std::string> read_lines(const std::string& path);

// Fraction of letter characters per script. Digits, punctuation and spaces
// are excluded from the denominator; letters of unrecognized scripts land
// in "Other". Fractions sum to <= 1 (exactly 1 when any letter is present).
std::map<std::string, double> classify_script(std::string_view text);

// Rules are evaluated in the fixed order EmptySide, LengthBounds,
// LengthRatio, ScriptMismatch; the first failure wins. Duplicate detection
// is corpus-level and lives in filter_corpus.
std::optional<FilterRule> filter_pair(const SentencePair& pair, const FilterConfig& cfg);

// Order-preserving; retained pairs keep their original relative order and
// report counts satisfy input = retained + sum(rejected). `workers` > 1
// fans the pure per-pair checks out over threads with an order-preserving
// merge, so results are identical for any worker count.
std::pair<ParallelCorpus, FilterReport>
filter_corpus(const ParallelCorpus& corpus, const FilterConfig& cfg, int workers = 1);

std::vector<std::string> split_whitespace(std::string_view text);
std::string trim(std::string_view text);

} // namespace indicmt
