#include "trxcat/sparse.hpp"

#include <cmath>

#include "trxcat/error.hpp"

namespace trxcat {

void SparseMatrix::append_row(std::span<const std::pair<std::uint32_t, double>> entries) {
    for (std::size_t k = 0; k < entries.size(); ++k) {
        if (k > 0 && entries[k].first <= entries[k - 1].first) {
            throw_validation("sparse row entries must have strictly increasing indices");
        }
        col_indices.push_back(entries[k].first);
        values.push_back(entries[k].second);
    }
    ++rows;
    row_offsets.push_back(col_indices.size());
}

double SparseMatrix::row_norm(std::size_t r) const {
    double sum = 0.0;
    for (double v : row_vals(r)) sum += v * v;
    return std::sqrt(sum);
}

void SparseMatrix::check_invariants() const {
    if (row_offsets.size() != rows + 1 || row_offsets.front() != 0 ||
        row_offsets.back() != values.size() || col_indices.size() != values.size()) {
        throw_validation("sparse matrix: inconsistent CSR arrays");
    }
    for (std::size_t r = 0; r < rows; ++r) {
        if (row_offsets[r] > row_offsets[r + 1]) throw_validation("sparse matrix: offsets decrease");
        auto cols_span = row_cols(r);
        for (std::size_t k = 0; k < cols_span.size(); ++k) {
            if (cols_span[k] >= cols) throw_validation("sparse matrix: column index out of range");
            if (k > 0 && cols_span[k] <= cols_span[k - 1]) {
                throw_validation("sparse matrix: column indices not strictly increasing");
            }
        }
    }
}

ColumnIndex ColumnIndex::build(const SparseMatrix& m) {
    ColumnIndex index;
    index.rows = m.rows;
    index.cols = m.cols;
    std::vector<std::size_t> counts(m.cols + 1, 0);
    for (std::uint32_t c : m.col_indices) ++counts[c + 1];
    for (std::size_t c = 0; c < m.cols; ++c) counts[c + 1] += counts[c];
    index.col_offsets = counts;
    index.row_indices.resize(m.nnz());
    index.values.resize(m.nnz());
    std::vector<std::size_t> cursor = index.col_offsets;
    for (std::size_t r = 0; r < m.rows; ++r) {
        auto cols_span = m.row_cols(r);
        auto vals_span = m.row_vals(r);
        for (std::size_t k = 0; k < cols_span.size(); ++k) {
            std::size_t pos = cursor[cols_span[k]]++;
            index.row_indices[pos] = static_cast<std::uint32_t>(r);
            index.values[pos] = vals_span[k];
        }
    }
    return index;
}

double dot(const SparseMatrix& m, std::size_t row_a, std::size_t row_b) {
    auto a_cols = m.row_cols(row_a);
    auto a_vals = m.row_vals(row_a);
    auto b_cols = m.row_cols(row_b);
    auto b_vals = m.row_vals(row_b);
    double sum = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a_cols.size() && j < b_cols.size()) {
        if (a_cols[i] == b_cols[j]) {
            sum += a_vals[i] * b_vals[j];
            ++i;
            ++j;
        } else if (a_cols[i] < b_cols[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return sum;
}

}  // namespace trxcat
