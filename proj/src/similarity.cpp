#include "trxcat/similarity.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <json.hpp>

#include "trxcat/error.hpp"
#include "trxcat/tfidf.hpp"

namespace trxcat {

namespace {

void check_threshold(double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0)) {
        throw_validation("similarity threshold must lie in (0, 1]");
    }
}

}  // namespace

std::vector<SimilarPair> similar_pairs(const SparseMatrix& m, double threshold,
                                       std::size_t block_rows) {
    check_threshold(threshold);
    if (block_rows == 0) block_rows = 1024;

    const ColumnIndex index = ColumnIndex::build(m);
    std::vector<SimilarPair> pairs;
    std::vector<double> scratch(m.rows, 0.0);
    std::vector<std::uint32_t> touched;
    touched.reserve(1024);

    for (std::size_t block_start = 0; block_start < m.rows; block_start += block_rows) {
        const std::size_t block_end = std::min(m.rows, block_start + block_rows);
        for (std::size_t i = block_start; i < block_end; ++i) {
            auto cols = m.row_cols(i);
            auto vals = m.row_vals(i);
            for (std::size_t k = 0; k < cols.size(); ++k) {
                const auto col_rows = index.column_rows(cols[k]);
                const auto col_vals = index.column_vals(cols[k]);
                // Rows within a column ascend; only partners j > i matter.
                auto it = std::upper_bound(col_rows.begin(), col_rows.end(),
                                           static_cast<std::uint32_t>(i));
                for (std::size_t p = static_cast<std::size_t>(it - col_rows.begin());
                     p < col_rows.size(); ++p) {
                    const std::uint32_t j = col_rows[p];
                    if (scratch[j] == 0.0) touched.push_back(j);
                    scratch[j] += vals[k] * col_vals[p];
                }
            }
            std::sort(touched.begin(), touched.end());
            for (std::uint32_t j : touched) {
                if (scratch[j] >= threshold) {
                    pairs.push_back({static_cast<std::uint32_t>(i), j, scratch[j]});
                }
                scratch[j] = 0.0;
            }
            touched.clear();
        }
    }
    return pairs;
}

DedupOutcome dedup_rows(const SparseMatrix& m, double threshold) {
    check_threshold(threshold);

    DedupOutcome outcome;
    // Inverted index over kept rows only; grows as rows are kept, so each
    // candidate is scored against every earlier kept row in one pass.
    std::vector<std::vector<std::pair<std::uint32_t, double>>> kept_columns(m.cols);
    std::vector<double> scratch(m.rows, 0.0);
    std::vector<std::uint32_t> touched;

    for (std::size_t j = 0; j < m.rows; ++j) {
        auto cols = m.row_cols(j);
        auto vals = m.row_vals(j);

        for (std::size_t k = 0; k < cols.size(); ++k) {
            for (const auto& [row, value] : kept_columns[cols[k]]) {
                if (scratch[row] == 0.0) touched.push_back(row);
                scratch[row] += vals[k] * value;
            }
        }

        bool drop = false;
        std::uint32_t best_row = 0;
        double best_cos = 0.0;
        for (std::uint32_t row : touched) {
            double c = scratch[row];
            scratch[row] = 0.0;
            if (c >= threshold && (c > best_cos || (c == best_cos && drop && row < best_row))) {
                drop = true;
                best_cos = c;
                best_row = row;
            }
        }
        touched.clear();

        if (drop) {
            outcome.dropped.emplace_back(static_cast<std::uint32_t>(j), best_row, best_cos);
        } else {
            outcome.kept.push_back(static_cast<std::uint32_t>(j));
            for (std::size_t k = 0; k < cols.size(); ++k) {
                kept_columns[cols[k]].emplace_back(static_cast<std::uint32_t>(j), vals[k]);
            }
        }
    }
    return outcome;
}

std::pair<Dataset, DropReport> dedup(const Dataset& dataset, const std::vector<TokenSequence>& docs,
                                     double threshold, std::size_t /*block_rows*/) {
    check_threshold(threshold);
    if (docs.size() != dataset.records.size()) {
        throw_validation("dedup: docs are not aligned with the dataset");
    }

    DropReport report;
    Dataset kept;
    kept.taxonomy = dataset.taxonomy;

    bool any_tokens = false;
    for (const auto& doc : docs) {
        if (!doc.tokens.empty()) {
            any_tokens = true;
            break;
        }
    }
    if (!any_tokens) {  // nothing to vectorize; all records kept
        kept.records = dataset.records;
        return {std::move(kept), std::move(report)};
    }

    const auto start = std::chrono::steady_clock::now();
    TfidfModel model = fit_tfidf(docs, 1);
    SparseMatrix matrix = tfidf_transform(model, docs);
    DedupOutcome outcome = dedup_rows(matrix, threshold);
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    kept.records.reserve(outcome.kept.size());
    for (std::uint32_t i : outcome.kept) kept.records.push_back(dataset.records[i]);
    report.drops.reserve(outcome.dropped.size());
    for (const auto& [dropped, kept_row, cosine] : outcome.dropped) {
        report.drops.push_back(
            {dataset.records[dropped].id, dataset.records[kept_row].id, cosine});
    }
    return {std::move(kept), std::move(report)};
}

std::string DropReport::to_jsonl() const {
    std::string out;
    for (const auto& drop : drops) {
        nlohmann::ordered_json row;
        row["dropped"] = drop.dropped_id;
        row["kept"] = drop.kept_id;
        row["cosine"] = drop.cosine;
        out += row.dump();
        out += '\n';
    }
    return out;
}

}  // namespace trxcat
