#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "trxcat/cleaning.hpp"
#include "trxcat/sparse.hpp"

namespace trxcat {

// Smoothed formulation: idf(t) = ln((1 + N) / (1 + df(t))) + 1, rows
// l2-normalized after tf * idf weighting.
struct TfidfModel {
    std::unordered_map<std::string, std::uint32_t> vocabulary;  // term -> column
    std::vector<std::string> terms;                             // column -> term
    std::vector<double> idf;
    std::size_t document_count = 0;

    std::size_t vocab_size() const { return terms.size(); }
};

// Vocabulary keeps terms with document frequency >= min_df, columns in
// first-appearance order. Throws Error(validation) when nothing survives.
TfidfModel fit_tfidf(const std::vector<TokenSequence>& docs, std::size_t min_df = 1);

// Out-of-vocabulary terms are ignored; an all-OOV document becomes a zero
// row (kept, not dropped).
SparseMatrix tfidf_transform(const TfidfModel& model, const std::vector<TokenSequence>& docs);

SparseVector tfidf_transform_one(const TfidfModel& model, const TokenSequence& doc);

}  // namespace trxcat
