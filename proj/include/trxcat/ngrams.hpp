#pragma once

#include <string>
#include <vector>

#include "trxcat/cleaning.hpp"
#include "trxcat/tfidf.hpp"

namespace trxcat {

struct NgramConfig {
    std::size_t max_n = 3;   // orders 1..max_n, capped at 5
    std::size_t min_df = 1;

    void validate() const;
};

// Contiguous word n-grams of orders 1..max_n, space-joined, with
// multiplicity, order 1 first then longer orders, each left to right.
std::vector<std::string> extract_ngrams(const TokenSequence& tokens, const NgramConfig& config);

TokenSequence ngram_terms(const TokenSequence& tokens, const NgramConfig& config);

TfidfModel fit_ngram_tfidf(const std::vector<TokenSequence>& docs, const NgramConfig& config);

SparseMatrix ngram_transform(const TfidfModel& model, const std::vector<TokenSequence>& docs,
                             const NgramConfig& config);

}  // namespace trxcat
