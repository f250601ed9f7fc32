#include "trxcat/word2vec.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "trxcat/error.hpp"
#include "trxcat/rng.hpp"

namespace trxcat {

void Word2VecParams::validate() const {
    if (vector_size == 0) throw_config("word2vec vector_size must be positive");
    if (window == 0) throw_config("word2vec window must be positive");
    if (epochs == 0) throw_config("word2vec epochs must be positive");
    if (!(initial_lr > 0.0)) throw_config("word2vec initial_lr must be positive");
    if (workers == 0) throw_config("word2vec workers must be positive");
}

namespace {

constexpr double kMaxExp = 6.0;
constexpr std::size_t kNegativeTableSize = 1 << 20;

double sigmoid(double x) {
    if (x > kMaxExp) return 1.0;
    if (x < -kMaxExp) return 0.0;
    return 1.0 / (1.0 + std::exp(-x));
}

// Unigram^0.75 table for negative draws.
std::vector<std::uint32_t> build_negative_table(const std::vector<std::size_t>& counts) {
    std::vector<std::uint32_t> table(kNegativeTableSize);
    double total = 0.0;
    for (std::size_t c : counts) total += std::pow(static_cast<double>(c), 0.75);
    std::size_t word = 0;
    double cumulative = std::pow(static_cast<double>(counts[0]), 0.75) / total;
    for (std::size_t i = 0; i < kNegativeTableSize; ++i) {
        table[i] = static_cast<std::uint32_t>(word);
        if (static_cast<double>(i + 1) / kNegativeTableSize > cumulative &&
            word + 1 < counts.size()) {
            ++word;
            cumulative += std::pow(static_cast<double>(counts[word]), 0.75) / total;
        }
    }
    return table;
}

struct TrainShared {
    const std::vector<std::vector<std::uint32_t>>* sentences;
    const std::vector<std::uint32_t>* negative_table;
    std::vector<float>* input;   // |V| x d
    std::vector<float>* output;  // |V| x d
    Word2VecParams params;
    std::size_t total_tokens = 0;
};

// One pass over a range of sentences; returns (loss sum, pair count).
std::pair<double, std::size_t> train_range(const TrainShared& shared, std::size_t begin,
                                           std::size_t end, std::size_t epoch, Rng rng,
                                           std::atomic<std::size_t>& tokens_done) {
    const std::size_t d = shared.params.vector_size;
    const auto& table = *shared.negative_table;
    float* input = shared.input->data();
    float* output = shared.output->data();
    std::vector<float> grad_center(d);

    const double total_work =
        static_cast<double>(shared.total_tokens) * static_cast<double>(shared.params.epochs) + 1.0;
    double loss_sum = 0.0;
    std::size_t pair_count = 0;

    for (std::size_t s = begin; s < end; ++s) {
        const auto& sentence = (*shared.sentences)[s];
        for (std::size_t pos = 0; pos < sentence.size(); ++pos) {
            const std::size_t done = tokens_done.fetch_add(1, std::memory_order_relaxed) +
                                     epoch * shared.total_tokens;
            double lr = shared.params.initial_lr *
                        std::max(1.0 - static_cast<double>(done) / total_work, 1e-4);

            const std::uint32_t center = sentence[pos];
            // Shrunken window, as in the classic trainer.
            const std::size_t shrink = rng.below(shared.params.window);
            const std::size_t left =
                pos > shared.params.window - shrink ? pos - (shared.params.window - shrink) : 0;
            const std::size_t right =
                std::min(sentence.size() - 1, pos + shared.params.window - shrink);

            for (std::size_t c = left; c <= right; ++c) {
                if (c == pos) continue;
                const std::uint32_t context = sentence[c];
                float* v_center = input + static_cast<std::size_t>(center) * d;
                std::fill(grad_center.begin(), grad_center.end(), 0.0f);
                double pair_loss = 0.0;

                for (std::size_t k = 0; k <= shared.params.negative; ++k) {
                    std::uint32_t target;
                    double label;
                    if (k == 0) {
                        target = context;
                        label = 1.0;
                    } else {
                        target = table[rng.below(table.size())];
                        if (target == context) continue;
                        label = 0.0;
                    }
                    float* u_target = output + static_cast<std::size_t>(target) * d;
                    double score = 0.0;
                    for (std::size_t j = 0; j < d; ++j) score += v_center[j] * u_target[j];
                    const double prediction = sigmoid(score);
                    const double g = (label - prediction) * lr;
                    pair_loss -= label > 0.5 ? std::log(std::max(prediction, 1e-10))
                                             : std::log(std::max(1.0 - prediction, 1e-10));
                    for (std::size_t j = 0; j < d; ++j) {
                        grad_center[j] += static_cast<float>(g) * u_target[j];
                        u_target[j] += static_cast<float>(g) * v_center[j];
                    }
                }
                for (std::size_t j = 0; j < d; ++j) v_center[j] += grad_center[j];
                loss_sum += pair_loss;
                ++pair_count;
            }
        }
    }
    return {loss_sum, pair_count};
}

}  // namespace

EmbeddingModel train_word2vec(const std::vector<TokenSequence>& docs,
                              const Word2VecParams& params) {
    params.validate();

    // Vocabulary in first-appearance order.
    std::unordered_map<std::string, std::size_t> counts;
    std::vector<std::string> appearance;
    for (const auto& doc : docs) {
        for (const auto& token : doc.tokens) {
            auto [it, inserted] = counts.try_emplace(token, 0);
            if (inserted) appearance.push_back(token);
            ++it->second;
        }
    }

    EmbeddingModel model;
    model.vector_size = params.vector_size;
    model.params = params;
    std::vector<std::size_t> kept_counts;
    for (const auto& token : appearance) {
        std::size_t c = counts.at(token);
        if (c < std::max<std::size_t>(params.min_count, 1)) continue;
        model.vocabulary.emplace(token, static_cast<std::uint32_t>(model.words.size()));
        model.words.push_back(token);
        kept_counts.push_back(c);
    }
    if (model.words.empty()) {
        throw_validation("word2vec: no token reaches min_count=" +
                         std::to_string(params.min_count));
    }

    std::vector<std::vector<std::uint32_t>> sentences;
    sentences.reserve(docs.size());
    std::size_t total_tokens = 0;
    for (const auto& doc : docs) {
        std::vector<std::uint32_t> ids;
        ids.reserve(doc.tokens.size());
        for (const auto& token : doc.tokens) {
            auto it = model.vocabulary.find(token);
            if (it != model.vocabulary.end()) ids.push_back(it->second);
        }
        total_tokens += ids.size();
        if (!ids.empty()) sentences.push_back(std::move(ids));
    }

    const std::size_t d = params.vector_size;
    model.vectors.assign(model.words.size() * d, 0.0f);
    std::vector<float> output(model.words.size() * d, 0.0f);
    Rng init_rng(splitmix64(params.seed));
    for (auto& v : model.vectors) {
        v = static_cast<float>((init_rng.next_double() - 0.5) / static_cast<double>(d));
    }

    const auto negative_table = build_negative_table(kept_counts);
    TrainShared shared{&sentences, &negative_table, &model.vectors, &output, params, total_tokens};

    for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
        std::atomic<std::size_t> tokens_done{0};
        double loss_sum = 0.0;
        std::size_t pair_count = 0;
        if (params.workers <= 1 || sentences.size() < 2 * params.workers) {
            auto [loss, pairs] = train_range(shared, 0, sentences.size(), epoch,
                                             Rng::substream(params.seed, epoch + 1), tokens_done);
            loss_sum = loss;
            pair_count = pairs;
        } else {
            std::vector<std::thread> threads;
            std::vector<std::pair<double, std::size_t>> results(params.workers);
            const std::size_t chunk = (sentences.size() + params.workers - 1) / params.workers;
            for (std::size_t w = 0; w < params.workers; ++w) {
                const std::size_t begin = w * chunk;
                const std::size_t end = std::min(sentences.size(), begin + chunk);
                threads.emplace_back([&, w, begin, end] {
                    results[w] = train_range(shared, begin, end, epoch,
                                             Rng::substream(params.seed, epoch * 1000 + w + 1),
                                             tokens_done);
                });
            }
            for (auto& t : threads) t.join();
            for (const auto& [loss, pairs] : results) {
                loss_sum += loss;
                pair_count += pairs;
            }
        }
        model.epoch_loss.push_back(pair_count ? loss_sum / static_cast<double>(pair_count) : 0.0);
    }
    return model;
}

std::vector<float> embed_sequence(const TokenSequence& tokens, const EmbeddingModel& model,
                                  std::size_t pad_len) {
    const std::size_t d = model.vector_size;
    std::vector<float> out(pad_len * d, 0.0f);
    const std::size_t n = std::min(pad_len, tokens.tokens.size());
    for (std::size_t i = 0; i < n; ++i) {
        auto it = model.vocabulary.find(tokens.tokens[i]);
        if (it == model.vocabulary.end()) continue;  // OOV slot stays zero
        const float* v = model.vector_of(it->second);
        std::copy(v, v + d, out.begin() + static_cast<std::ptrdiff_t>(i * d));
    }
    return out;
}

double cosine_between(const EmbeddingModel& model, const std::string& a, const std::string& b) {
    auto ia = model.vocabulary.find(a);
    auto ib = model.vocabulary.find(b);
    if (ia == model.vocabulary.end() || ib == model.vocabulary.end()) return 0.0;
    const float* va = model.vector_of(ia->second);
    const float* vb = model.vector_of(ib->second);
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t j = 0; j < model.vector_size; ++j) {
        dot += va[j] * vb[j];
        na += va[j] * va[j];
        nb += vb[j] * vb[j];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / std::sqrt(na * nb);
}

}  // namespace trxcat
