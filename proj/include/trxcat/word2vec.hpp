#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "trxcat/cleaning.hpp"

namespace trxcat {

struct Word2VecParams {
    std::size_t vector_size = 300;
    std::size_t window = 3;
    std::size_t epochs = 15;
    std::size_t negative = 5;
    std::size_t min_count = 2;
    double initial_lr = 0.025;  // linearly decayed
    std::uint64_t seed = 1;
    std::size_t workers = 1;    // >1 trades bit-determinism for speed

    void validate() const;
};

struct EmbeddingModel {
    std::size_t vector_size = 0;
    std::vector<std::string> words;                             // row -> token
    std::unordered_map<std::string, std::uint32_t> vocabulary;  // token -> row
    std::vector<float> vectors;                                 // |V| x d, row-major
    std::vector<double> epoch_loss;                             // mean pair loss per epoch
    Word2VecParams params;

    std::size_t vocab_size() const { return words.size(); }
    const float* vector_of(std::uint32_t row) const { return vectors.data() + row * vector_size; }
};

// Skip-gram with negative sampling over the token sequences. Tokens seen
// fewer than min_count times are ignored. Deterministic for workers == 1;
// with more workers updates race benignly and only statistical properties
// are preserved.
EmbeddingModel train_word2vec(const std::vector<TokenSequence>& docs, const Word2VecParams& params);

// Concatenates per-token vectors in order into a pad_len * d vector:
// out-of-vocabulary tokens contribute zeros, short sequences are post-padded
// with zeros, long ones truncated at pad_len.
std::vector<float> embed_sequence(const TokenSequence& tokens, const EmbeddingModel& model,
                                  std::size_t pad_len = 14);

double cosine_between(const EmbeddingModel& model, const std::string& a, const std::string& b);

}  // namespace trxcat
