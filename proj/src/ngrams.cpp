#include "trxcat/ngrams.hpp"

#include "trxcat/error.hpp"

namespace trxcat {

void NgramConfig::validate() const {
    if (max_n < 1 || max_n > 5) throw_config("ngram max_n must lie in [1, 5]");
}

std::vector<std::string> extract_ngrams(const TokenSequence& tokens, const NgramConfig& config) {
    config.validate();
    const auto& t = tokens.tokens;
    std::vector<std::string> grams;
    for (std::size_t n = 1; n <= config.max_n; ++n) {
        if (t.size() < n) break;
        for (std::size_t i = 0; i + n <= t.size(); ++i) {
            std::string gram = t[i];
            for (std::size_t k = 1; k < n; ++k) {
                gram += ' ';
                gram += t[i + k];
            }
            grams.push_back(std::move(gram));
        }
    }
    return grams;
}

TokenSequence ngram_terms(const TokenSequence& tokens, const NgramConfig& config) {
    TokenSequence out;
    out.source_id = tokens.source_id;
    out.tokens = extract_ngrams(tokens, config);
    return out;
}

namespace {

std::vector<TokenSequence> to_ngram_docs(const std::vector<TokenSequence>& docs,
                                         const NgramConfig& config) {
    std::vector<TokenSequence> out;
    out.reserve(docs.size());
    for (const auto& doc : docs) out.push_back(ngram_terms(doc, config));
    return out;
}

}  // namespace

TfidfModel fit_ngram_tfidf(const std::vector<TokenSequence>& docs, const NgramConfig& config) {
    return fit_tfidf(to_ngram_docs(docs, config), config.min_df);
}

SparseMatrix ngram_transform(const TfidfModel& model, const std::vector<TokenSequence>& docs,
                             const NgramConfig& config) {
    return tfidf_transform(model, to_ngram_docs(docs, config));
}

}  // namespace trxcat
