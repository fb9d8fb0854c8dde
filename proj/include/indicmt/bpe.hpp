#pragma once

#include <array>
#include <string>
#include <unordered_map>
#include <vector>

#include "indicmt/corpus.hpp"

namespace indicmt {

struct TokenizedSentence {
    std::vector<int> ids;
    Lang lang = Lang::en;
};

// Byte-pair encoding model: an ordered merge list plus the token/id table.
// Ids are contiguous with the reserved tokens first: <pad> <s> </s> <unk>,
// then one <2xx> tag per language, then the training character set (sorted),
// then one token per applied merge in learning order.
class BpeModel {
public:
    static constexpr int kPadId = 0;
    static constexpr int kBosId = 1;
    static constexpr int kEosId = 2;
    static constexpr int kUnkId = 3;
    static constexpr const char* kEndOfWord = "</w>";

    static int num_specials() { return 4 + kNumLangs; }
    static int lang_tag_id(Lang lang) { return 4 + static_cast<int>(lang); }
    static std::string lang_tag(Lang lang) {
        return "<2" + std::string(lang_code(lang)) + ">";
    }

    const std::vector<std::pair<std::string, std::string>>& merges() const {
        return merges_;
    }
    const std::vector<std::string>& tokens() const { return id_to_token_; }
    int vocab_size() const { return static_cast<int>(id_to_token_.size()); }
    int token_id(const std::string& token) const; // -1 when absent

    std::vector<int> encode(const std::string& text) const;
    TokenizedSentence encode_sentence(const std::string& text, Lang lang) const;
    std::string decode(const std::vector<int>& ids) const; // throws tokenizer.InvalidId

    // Splits one word into merge-applied subword strings ("low" -> {"low</w>"}).
    std::vector<std::string> segment_word(const std::string& word) const;

    void save(const std::string& prefix) const; // prefix.merges + prefix.vocab
    static BpeModel load(const std::string& prefix);

    friend BpeModel bpe_train(const std::vector<std::string>& lines,
                              std::size_t num_merges);

private:
    void index_merges();

    std::vector<std::pair<std::string, std::string>> merges_;
    std::vector<std::string> id_to_token_;
    std::unordered_map<std::string, int> token_to_id_;
    // merge (left,right) -> rank; lower rank applies first during encoding
    std::unordered_map<std::string, int> merge_rank_;
};

// Learns `num_merges` merges over the pooled lines. Each step merges the
// most frequent adjacent symbol pair; ties break to the lexicographically
// smallest (left, right); learning stops early once the best pair occurs
// fewer than twice. Throws tokenizer.EmptyCorpus.
BpeModel bpe_train(const std::vector<std::string>& lines, std::size_t num_merges);
BpeModel bpe_train(const std::vector<MonoCorpus>& corpora, std::size_t num_merges);

inline std::vector<int> bpe_encode(const BpeModel& model, const std::string& text) {
    return model.encode(text);
}
inline std::string bpe_decode(const BpeModel& model, const std::vector<int>& ids) {
    return model.decode(ids);
}

// Prepends "<2xx> " (xx = target language) to the source side. Calling it
// twice double-tags; tagging exactly once is the caller's contract.
SentencePair inject_target_token(const SentencePair& pair);
std::string inject_target_token(const std::string& source, Lang target_lang);

} // namespace indicmt
