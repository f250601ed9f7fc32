#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trxcat/cleaning.hpp"
#include "trxcat/sparse.hpp"
#include "trxcat/transaction.hpp"

namespace trxcat {

struct SimilarPair {
    std::uint32_t first = 0;   // always < second
    std::uint32_t second = 0;
    double cosine = 0.0;
};

// All row pairs (i < j) with cosine >= threshold, ascending (i, j). Rows
// must be l2-normalized or zero. The product is computed block-by-block
// against a column index with a dense scratch accumulator per row; the
// full N x N product is never materialized.
std::vector<SimilarPair> similar_pairs(const SparseMatrix& m, double threshold,
                                       std::size_t block_rows = 1024);

struct DropRecord {
    std::string dropped_id;
    std::string kept_id;
    double cosine = 0.0;
};

struct DropReport {
    std::vector<DropRecord> drops;
    double seconds = 0.0;  // wall clock of the scan

    std::string to_jsonl() const;
};

// Greedy earliest-kept near-duplicate filter: scan records in input order
// and drop a record iff its cosine to some already-kept record reaches the
// threshold (the reported kept record is the best match, ties to the
// earliest). Zero-vector documents are always kept. `docs` must be aligned
// with `dataset.records`.
std::pair<Dataset, DropReport> dedup(const Dataset& dataset, const std::vector<TokenSequence>& docs,
                                     double threshold, std::size_t block_rows = 1024);

// Index view of the same scan, for callers that hold no Dataset.
struct DedupOutcome {
    std::vector<std::uint32_t> kept;                 // indices in input order
    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> dropped;  // (dropped, kept, cosine)
};
DedupOutcome dedup_rows(const SparseMatrix& m, double threshold);

}  // namespace trxcat
