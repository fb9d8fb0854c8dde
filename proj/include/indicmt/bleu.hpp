#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace indicmt {

struct BleuReport {
    double score = 0.0;                 // 0..100
    std::vector<double> precisions;     // p_1..p_max_n
    double brevity_penalty = 1.0;
    std::size_t hyp_length = 0;
    std::size_t ref_length = 0;

    std::string to_json() const;
};

struct BleuOptions {
    int max_n = 4;
    // With smoothing off, any all-zero n-gram order zeroes the score.
    // The epsilon floor replaces a zero match count for tiny test sets.
    bool smooth = false;
    double smooth_eps = 0.1;
};

// Whitespace split, then every punctuation or symbol character becomes its
// own token. Letters (including combining marks) and digits stay glued, so
// Indic words survive intact while danda etc. separate.
std::vector<std::string> tokenize_for_bleu(std::string_view text);

// All contiguous n-grams with multiplicity; len < n gives an empty map.
std::map<std::vector<std::string>, std::size_t>
ngram_counts(const std::vector<std::string>& tokens, std::size_t n);

// Corpus-level single-reference BLEU with clipped n-gram precision and the
// min(1, e^(1 - ref/hyp)) brevity penalty.
// Throws eval.LengthMismatch / eval.EmptyEvaluation.
BleuReport corpus_bleu(const std::vector<std::string>& hypotheses,
                       const std::vector<std::string>& references,
                       const BleuOptions& options = {});

} // namespace indicmt
