#pragma once

#include <cstdint>
#include <vector>

#include "trxcat/dense.hpp"

namespace trxcat {

struct PcaModel {
    std::size_t input_dim = 0;
    std::size_t k = 0;                              // components kept
    std::vector<float> mean;                        // input_dim
    std::vector<float> components;                  // k x input_dim, orthonormal rows
    std::vector<double> explained_variance;         // top-k covariance eigenvalues, descending
    std::vector<double> explained_variance_ratio;   // against total variance
    double total_variance = 0.0;
    bool rank_deficient = false;  // fewer nonzero-variance directions than requested

    double retained_variance() const;  // sum of the ratio entries
};

// Principal components of the mean-centered data: top-k eigenvectors of
// the sample covariance (denominator N-1), eigenvalues descending. Signs
// are fixed so each component's largest-magnitude coordinate is positive.
// Requires 2 <= N, 1 <= k <= min(N-1, D) and finite input; rank-deficient
// data yields fewer components plus the warning flag.
PcaModel fit_pca(const DenseMatrix& x, std::size_t k);

// Projects centered rows onto the components: result is N x k.
DenseMatrix pca_transform(const PcaModel& model, const DenseMatrix& x);

}  // namespace trxcat
