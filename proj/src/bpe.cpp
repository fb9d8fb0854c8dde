#include "indicmt/bpe.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "indicmt/error.hpp"
#include "indicmt/utf8.hpp"

namespace indicmt {

namespace {

using Word = std::vector<std::string>;
using Pair = std::pair<std::string, std::string>;

// Splits a word into single-codepoint symbols plus the end-of-word marker.
Word word_symbols(const std::string& word) {
    Word symbols;
    for (char32_t cp : utf8_decode_or_throw(word)) {
        std::string s;
        utf8_append(s, cp);
        symbols.push_back(std::move(s));
    }
    symbols.emplace_back(BpeModel::kEndOfWord);
    return symbols;
}

std::string merge_key(const std::string& left, const std::string& right) {
    return left + ' ' + right;
}

} // namespace

int BpeModel::token_id(const std::string& token) const {
    auto it = token_to_id_.find(token);
    return it == token_to_id_.end() ? -1 : it->second;
}

void BpeModel::index_merges() {
    merge_rank_.clear();
    for (std::size_t i = 0; i < merges_.size(); ++i)
        merge_rank_.emplace(merge_key(merges_[i].first, merges_[i].second),
                            static_cast<int>(i));
}

std::vector<std::string> BpeModel::segment_word(const std::string& word) const {
    Word symbols = word_symbols(word);
    while (symbols.size() > 1) {
        int best_rank = -1;
        std::size_t best_pos = 0;
        for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
            auto it = merge_rank_.find(merge_key(symbols[i], symbols[i + 1]));
            if (it != merge_rank_.end() && (best_rank < 0 || it->second < best_rank)) {
                best_rank = it->second;
                best_pos = i;
            }
        }
        if (best_rank < 0) break;
        // Apply the winning merge at every occurrence, left to right.
        const Pair& m = merges_[best_rank];
        Word next;
        next.reserve(symbols.size());
        for (std::size_t i = 0; i < symbols.size();) {
            if (i + 1 < symbols.size() && symbols[i] == m.first &&
                symbols[i + 1] == m.second) {
                next.push_back(m.first + m.second);
                i += 2;
            } else {
                next.push_back(symbols[i]);
                i += 1;
            }
        }
        symbols = std::move(next);
        (void)best_pos;
    }
    return symbols;
}

std::vector<int> BpeModel::encode(const std::string& text) const {
    std::vector<int> ids;
    for (const auto& word : split_whitespace(text)) {
        // Reserved tokens (language tags in particular) encode as themselves.
        if (word.size() > 2 && word.front() == '<' && word.back() == '>') {
            const int id = token_id(word);
            if (id >= 0 && id < num_specials()) {
                ids.push_back(id);
                continue;
            }
        }
        for (const auto& symbol : segment_word(word)) {
            const int id = token_id(symbol);
            if (id >= 0) {
                ids.push_back(id);
            } else {
                // Unknown single characters fall back to <unk>; multi-char
                // symbols can only arise from known merges, so per-codepoint
                // emission is enough.
                for (char32_t cp : utf8_decode_or_throw(symbol)) {
                    std::string c;
                    utf8_append(c, cp);
                    const int cid = token_id(c);
                    ids.push_back(cid >= 0 ? cid : kUnkId);
                }
            }
        }
    }
    return ids;
}

TokenizedSentence BpeModel::encode_sentence(const std::string& text, Lang lang) const {
    return TokenizedSentence{encode(text), lang};
}

std::string BpeModel::decode(const std::vector<int>& ids) const {
    std::string joined;
    for (int id : ids) {
        if (id < 0 || id >= vocab_size())
            raise("tokenizer.InvalidId", "id " + std::to_string(id) + " out of range");
        if (id < num_specials()) continue;
        joined += id_to_token_[static_cast<std::size_t>(id)];
    }
    // End-of-word markers become spaces; the final marker closes the text.
    std::string out;
    out.reserve(joined.size());
    static const std::string kMarker = kEndOfWord;
    std::size_t i = 0;
    while (i < joined.size()) {
        if (joined.compare(i, kMarker.size(), kMarker) == 0) {
            out.push_back(' ');
            i += kMarker.size();
        } else {
            out.push_back(joined[i]);
            ++i;
        }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

BpeModel bpe_train(const std::vector<std::string>& lines, std::size_t num_merges) {
    // Distinct words with counts; symbol sequences start as codepoints.
    std::map<std::string, long long> word_counts;
    for (const auto& line : lines)
        for (const auto& word : split_whitespace(line)) ++word_counts[word];
    if (word_counts.empty()) raise("tokenizer.EmptyCorpus", "no words to train on");

    std::vector<Word> words;
    std::vector<long long> counts;
    words.reserve(word_counts.size());
    std::set<std::string> charset;
    for (const auto& [word, count] : word_counts) {
        Word symbols = word_symbols(word);
        for (const auto& s : symbols) charset.insert(s);
        words.push_back(std::move(symbols));
        counts.push_back(count);
    }

    BpeModel model;
    const auto add_token = [&model](const std::string& token) {
        if (model.token_to_id_.emplace(token, model.vocab_size()).second)
            model.id_to_token_.push_back(token);
    };
    add_token("<pad>");
    add_token("<s>");
    add_token("</s>");
    add_token("<unk>");
    for (int l = 0; l < kNumLangs; ++l)
        add_token(BpeModel::lang_tag(static_cast<Lang>(l)));
    for (const auto& c : charset) add_token(c);

    for (std::size_t step = 0; step < num_merges; ++step) {
        // Recounting from scratch keeps this simple and exactly matches the
        // reference oracle; corpora at this scale train in well under a second.
        std::map<Pair, long long> pair_counts;
        for (std::size_t w = 0; w < words.size(); ++w) {
            const Word& word = words[w];
            for (std::size_t i = 0; i + 1 < word.size(); ++i)
                pair_counts[{word[i], word[i + 1]}] += counts[w];
        }
        const Pair* best = nullptr;
        long long best_count = 0;
        for (const auto& [pair, count] : pair_counts) {
            // std::map iterates in ascending (left, right) order, so on ties
            // the lexicographically smallest pair is kept.
            if (count > best_count) {
                best_count = count;
                best = &pair;
            }
        }
        if (!best || best_count < 2) break;
        const Pair merge = *best;
        for (auto& word : words) {
            Word next;
            next.reserve(word.size());
            for (std::size_t i = 0; i < word.size();) {
                if (i + 1 < word.size() && word[i] == merge.first &&
                    word[i + 1] == merge.second) {
                    next.push_back(merge.first + merge.second);
                    i += 2;
                } else {
                    next.push_back(word[i]);
                    i += 1;
                }
            }
            word = std::move(next);
        }
        model.merges_.push_back(merge);
        add_token(merge.first + merge.second);
    }

    model.index_merges();
    return model;
}

BpeModel bpe_train(const std::vector<MonoCorpus>& corpora, std::size_t num_merges) {
    std::vector<std::string> lines;
    for (const auto& c : corpora)
        lines.insert(lines.end(), c.lines.begin(), c.lines.end());
    return bpe_train(lines, num_merges);
}

void BpeModel::save(const std::string& prefix) const {
    std::ofstream merges_out(prefix + ".merges", std::ios::binary);
    std::ofstream vocab_out(prefix + ".vocab", std::ios::binary);
    if (!merges_out || !vocab_out)
        raise("tokenizer.FileNotFound", "cannot write model files at " + prefix);
    for (const auto& [left, right] : merges_) merges_out << left << ' ' << right << '\n';
    for (std::size_t id = 0; id < id_to_token_.size(); ++id)
        vocab_out << id_to_token_[id] << '\t' << id << '\n';
}

BpeModel BpeModel::load(const std::string& prefix) {
    std::ifstream merges_in(prefix + ".merges", std::ios::binary);
    std::ifstream vocab_in(prefix + ".vocab", std::ios::binary);
    if (!merges_in || !vocab_in)
        raise("tokenizer.FileNotFound", "cannot open model files at " + prefix);
    BpeModel model;
    std::string line;
    while (std::getline(merges_in, line)) {
        if (line.empty()) continue;
        const auto space = line.find(' ');
        if (space == std::string::npos)
            raise("tokenizer.ModelFormat", "bad merges line: " + line);
        model.merges_.emplace_back(line.substr(0, space), line.substr(space + 1));
    }
    while (std::getline(vocab_in, line)) {
        if (line.empty()) continue;
        const auto tab = line.rfind('\t');
        if (tab == std::string::npos)
            raise("tokenizer.ModelFormat", "bad vocab line: " + line);
        const int id = std::stoi(line.substr(tab + 1));
        if (id != static_cast<int>(model.id_to_token_.size()))
            raise("tokenizer.ModelFormat", "vocab ids must be contiguous and ascending");
        model.id_to_token_.push_back(line.substr(0, tab));
    }
    if (static_cast<int>(model.id_to_token_.size()) < BpeModel::num_specials())
        raise("tokenizer.ModelFormat", "vocab is missing reserved tokens");
    for (std::size_t id = 0; id < model.id_to_token_.size(); ++id)
        model.token_to_id_.emplace(model.id_to_token_[id], static_cast<int>(id));
    model.index_merges();
    return model;
}

std::string inject_target_token(const std::string& source, Lang target_lang) {
    return BpeModel::lang_tag(target_lang) + " " + source;
}

SentencePair inject_target_token(const SentencePair& pair) {
    SentencePair tagged = pair;
    tagged.source = inject_target_token(pair.source, pair.target_lang);
    return tagged;
}

} // namespace indicmt
