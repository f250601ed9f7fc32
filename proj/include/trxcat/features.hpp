#pragma once

#include <variant>

#include "trxcat/dense.hpp"
#include "trxcat/sparse.hpp"

namespace trxcat {

// Either a CSR matrix (n-gram tf-idf path) or a dense one (embedding
// path); rows align with dataset order.
class FeatureMatrix {
public:
    FeatureMatrix() : storage_(SparseMatrix{}) {}
    explicit FeatureMatrix(SparseMatrix m) : storage_(std::move(m)) {}
    explicit FeatureMatrix(DenseMatrix m) : storage_(std::move(m)) {}

    bool is_sparse() const { return std::holds_alternative<SparseMatrix>(storage_); }
    const SparseMatrix& sparse() const { return std::get<SparseMatrix>(storage_); }
    const DenseMatrix& dense() const { return std::get<DenseMatrix>(storage_); }

    std::size_t rows() const {
        return is_sparse() ? sparse().rows : dense().rows;
    }
    std::size_t cols() const {
        return is_sparse() ? sparse().cols : dense().cols;
    }

    double value_at(std::size_t r, std::size_t c) const;

    // f(column, value) over the stored entries of row r (dense: all of them).
    template <typename F>
    void for_row(std::size_t r, F&& f) const {
        if (is_sparse()) {
            const auto& m = sparse();
            auto cols_span = m.row_cols(r);
            auto vals_span = m.row_vals(r);
            for (std::size_t k = 0; k < cols_span.size(); ++k) f(cols_span[k], vals_span[k]);
        } else {
            const auto& m = dense();
            const float* row = m.row(r);
            for (std::size_t c = 0; c < m.cols; ++c) f(static_cast<std::uint32_t>(c), row[c]);
        }
    }

    bool all_non_negative() const;
    bool all_finite() const;

private:
    std::variant<SparseMatrix, DenseMatrix> storage_;
};

}  // namespace trxcat
