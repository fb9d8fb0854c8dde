#include "indicmt/bleu.hpp"

#include <algorithm>
#include <cmath>

#include "indicmt/error.hpp"
#include "indicmt/unicode.hpp"
#include "indicmt/utf8.hpp"

#include "json.hpp"

namespace indicmt {

std::string BleuReport::to_json() const {
    nlohmann::json j;
    j["score"] = score;
    j["precisions"] = precisions;
    j["brevity_penalty"] = brevity_penalty;
    j["hyp_length"] = hyp_length;
    j["ref_length"] = ref_length;
    return j.dump(2) + "\n";
}

std::vector<std::string> tokenize_for_bleu(std::string_view text) {
    std::vector<char32_t> cps;
    if (!utf8_decode(text, cps)) cps.clear();
    std::vector<std::string> tokens;
    std::string current;
    const auto flush = [&] {
        if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    };
    for (char32_t cp : cps) {
        if (is_space(cp)) {
            flush();
        } else if (is_word_char(cp)) {
            utf8_append(current, cp);
        } else {
            flush();
            std::string punct;
            utf8_append(punct, cp);
            tokens.push_back(std::move(punct));
        }
    }
    flush();
    return tokens;
}

std::map<std::vector<std::string>, std::size_t>
ngram_counts(const std::vector<std::string>& tokens, std::size_t n) {
    std::map<std::vector<std::string>, std::size_t> counts;
    if (n == 0 || tokens.size() < n) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i)
        ++counts[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
    return counts;
}

BleuReport corpus_bleu(const std::vector<std::string>& hypotheses,
                       const std::vector<std::string>& references,
                       const BleuOptions& options) {
    if (hypotheses.size() != references.size())
        raise("eval.LengthMismatch",
              std::to_string(hypotheses.size()) + " hypotheses vs " +
                  std::to_string(references.size()) + " references");
    if (hypotheses.empty()) raise("eval.EmptyEvaluation", "nothing to score");

    const std::size_t max_n = static_cast<std::size_t>(options.max_n);
    std::vector<double> matches(max_n, 0.0), totals(max_n, 0.0);
    std::size_t hyp_len = 0, ref_len = 0;

    for (std::size_t s = 0; s < hypotheses.size(); ++s) {
        const auto hyp = tokenize_for_bleu(hypotheses[s]);
        const auto ref = tokenize_for_bleu(references[s]);
        hyp_len += hyp.size();
        ref_len += ref.size();
        for (std::size_t n = 1; n <= max_n; ++n) {
            const auto hyp_counts = ngram_counts(hyp, n);
            if (hyp_counts.empty()) continue;
            const auto ref_counts = ngram_counts(ref, n);
            for (const auto& [gram, count] : hyp_counts) {
                totals[n - 1] += static_cast<double>(count);
                const auto it = ref_counts.find(gram);
                if (it != ref_counts.end())
                    matches[n - 1] += static_cast<double>(std::min(count, it->second));
            }
        }
    }

    BleuReport report;
    report.hyp_length = hyp_len;
    report.ref_length = ref_len;
    report.precisions.resize(max_n, 0.0);

    // Orders with an empty denominator (every hypothesis shorter than n)
    // carry no evidence and drop out of the geometric mean; that keeps
    // score(X, X) = 100 even for corpora of very short sentences. A zero
    // match count with a nonzero denominator still zeroes the score unless
    // epsilon smoothing is on.
    double log_precision_sum = 0.0;
    std::size_t orders_with_evidence = 0;
    bool zero_order = false;
    for (std::size_t n = 0; n < max_n; ++n) {
        report.precisions[n] = totals[n] > 0.0 ? matches[n] / totals[n] : 0.0;
        if (totals[n] == 0.0) continue;
        ++orders_with_evidence;
        double m = matches[n];
        if (options.smooth && m == 0.0) m = options.smooth_eps;
        if (m == 0.0)
            zero_order = true;
        else
            log_precision_sum += std::log(m / totals[n]);
    }

    report.brevity_penalty =
        (hyp_len == 0) ? 0.0
        : (hyp_len >= ref_len)
            ? 1.0
            : std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(hyp_len));

    report.score = (zero_order || orders_with_evidence == 0)
                       ? 0.0
                       : 100.0 * report.brevity_penalty *
                             std::exp(log_precision_sum /
                                      static_cast<double>(orders_with_evidence));
    return report;
}

} // namespace indicmt
