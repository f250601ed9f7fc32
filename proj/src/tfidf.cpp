#include "trxcat/tfidf.hpp"

#include <algorithm>
#include <cmath>

#include "trxcat/error.hpp"

namespace trxcat {

TfidfModel fit_tfidf(const std::vector<TokenSequence>& docs, std::size_t min_df) {
    if (docs.empty()) throw_validation("cannot fit tf-idf on an empty corpus");

    // First-appearance order for stable column numbering.
    std::unordered_map<std::string, std::size_t> df;
    std::vector<std::string> appearance;
    std::unordered_map<std::string, std::uint32_t> last_doc;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        for (const auto& term : docs[d].tokens) {
            auto [it, inserted] = df.try_emplace(term, 0);
            if (inserted) {
                appearance.push_back(term);
                last_doc[term] = UINT32_MAX;
            }
            if (last_doc[term] != d) {
                last_doc[term] = static_cast<std::uint32_t>(d);
                ++it->second;
            }
        }
    }

    TfidfModel model;
    model.document_count = docs.size();
    const double n = static_cast<double>(docs.size());
    for (const auto& term : appearance) {
        std::size_t freq = df.at(term);
        if (freq < min_df) continue;
        std::uint32_t col = static_cast<std::uint32_t>(model.terms.size());
        model.vocabulary.emplace(term, col);
        model.terms.push_back(term);
        model.idf.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(freq))) + 1.0);
    }
    if (model.terms.empty()) {
        throw_validation("tf-idf vocabulary is empty (corpus has no term with df >= " +
                         std::to_string(min_df) + ")");
    }
    return model;
}

SparseVector tfidf_transform_one(const TfidfModel& model, const TokenSequence& doc) {
    std::unordered_map<std::uint32_t, double> counts;
    for (const auto& term : doc.tokens) {
        auto it = model.vocabulary.find(term);
        if (it != model.vocabulary.end()) counts[it->second] += 1.0;
    }
    SparseVector vec;
    vec.dims = model.vocab_size();
    vec.entries.reserve(counts.size());
    for (const auto& [col, tf] : counts) {
        vec.entries.emplace_back(col, tf * model.idf[col]);
    }
    std::sort(vec.entries.begin(), vec.entries.end());
    double norm = 0.0;
    for (const auto& [col, w] : vec.entries) norm += w * w;
    if (norm > 0.0) {
        norm = std::sqrt(norm);
        for (auto& [col, w] : vec.entries) w /= norm;
    }
    return vec;
}

SparseMatrix tfidf_transform(const TfidfModel& model, const std::vector<TokenSequence>& docs) {
    SparseMatrix m;
    m.cols = model.vocab_size();
    for (const auto& doc : docs) {
        SparseVector vec = tfidf_transform_one(model, doc);
        m.append_row(vec.entries);
    }
    return m;
}

}  // namespace trxcat
