#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace trxcat {

// (index, weight) pairs with strictly increasing indices, weights != 0.
struct SparseVector {
    std::size_t dims = 0;
    std::vector<std::pair<std::uint32_t, double>> entries;
};

// Compressed sparse row matrix.
struct SparseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::size_t> row_offsets;   // rows + 1, non-decreasing
    std::vector<std::uint32_t> col_indices; // strictly increasing per row
    std::vector<double> values;

    SparseMatrix() : row_offsets{0} {}

    std::size_t nnz() const { return values.size(); }

    void append_row(std::span<const std::pair<std::uint32_t, double>> entries);

    std::span<const std::uint32_t> row_cols(std::size_t r) const {
        return {col_indices.data() + row_offsets[r], row_offsets[r + 1] - row_offsets[r]};
    }
    std::span<const double> row_vals(std::size_t r) const {
        return {values.data() + row_offsets[r], row_offsets[r + 1] - row_offsets[r]};
    }

    double row_norm(std::size_t r) const;

    // Structural checks (offsets monotone, indices sorted/unique/in range).
    void check_invariants() const;  // throws Error(validation)
};

// Column-major companion index for row-by-row dot products: for each
// column, the (row, value) pairs in increasing row order.
struct ColumnIndex {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::size_t> col_offsets;
    std::vector<std::uint32_t> row_indices;
    std::vector<double> values;

    static ColumnIndex build(const SparseMatrix& m);

    std::span<const std::uint32_t> column_rows(std::size_t c) const {
        return {row_indices.data() + col_offsets[c], col_offsets[c + 1] - col_offsets[c]};
    }
    std::span<const double> column_vals(std::size_t c) const {
        return {values.data() + col_offsets[c], col_offsets[c + 1] - col_offsets[c]};
    }
};

double dot(const SparseMatrix& m, std::size_t row_a, std::size_t row_b);

}  // namespace trxcat
