#include "trxcat/pca.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "trxcat/error.hpp"

namespace trxcat {

double PcaModel::retained_variance() const {
    double sum = 0.0;
    for (double r : explained_variance_ratio) sum += r;
    return sum;
}

PcaModel fit_pca(const DenseMatrix& x, std::size_t k) {
    const std::size_t n = x.rows;
    const std::size_t d = x.cols;
    if (n < 2 || d == 0) throw_validation("pca needs at least 2 rows and 1 column");
    if (k < 1 || k > std::min(n - 1, d)) {
        throw_validation("pca: k must lie in [1, min(N-1, D)]");
    }
    for (float v : x.data) {
        if (!std::isfinite(v)) throw_validation("pca: input contains non-finite values");
    }

    using Eigen::MatrixXd;
    using Eigen::VectorXd;
    using RowMajorF = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

    Eigen::Map<const RowMajorF> data(x.data.data(), static_cast<Eigen::Index>(n),
                                     static_cast<Eigen::Index>(d));

    VectorXd mean = VectorXd::Zero(static_cast<Eigen::Index>(d));
    // Block-wise double accumulation keeps memory flat at large N.
    const Eigen::Index block = 4096;
    for (Eigen::Index r0 = 0; r0 < data.rows(); r0 += block) {
        const Eigen::Index rows = std::min<Eigen::Index>(block, data.rows() - r0);
        mean += data.middleRows(r0, rows).cast<double>().colwise().sum();
    }
    mean /= static_cast<double>(n);

    MatrixXd cov = MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (Eigen::Index r0 = 0; r0 < data.rows(); r0 += block) {
        const Eigen::Index rows = std::min<Eigen::Index>(block, data.rows() - r0);
        MatrixXd centered = data.middleRows(r0, rows).cast<double>();
        centered.rowwise() -= mean.transpose();
        cov.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose());
    }
    cov /= static_cast<double>(n - 1);

    const double total_variance = cov.diagonal().sum();

    Eigen::SelfAdjointEigenSolver<MatrixXd> solver;
    solver.compute(cov);  // reads the lower triangle; eigenvalues ascend
    if (solver.info() != Eigen::Success) throw_validation("pca: eigendecomposition failed");
    const VectorXd& eigenvalues = solver.eigenvalues();
    const MatrixXd& eigenvectors = solver.eigenvectors();

    const double tol = std::max(eigenvalues.cwiseAbs().maxCoeff(), 1.0) * 1e-12;

    PcaModel model;
    model.input_dim = d;
    model.total_variance = total_variance;
    model.mean.resize(d);
    for (std::size_t j = 0; j < d; ++j) model.mean[j] = static_cast<float>(mean[static_cast<Eigen::Index>(j)]);

    for (std::size_t c = 0; c < k; ++c) {
        const Eigen::Index idx = static_cast<Eigen::Index>(d - 1 - c);
        double lambda = eigenvalues[idx];
        if (lambda <= tol) {
            model.rank_deficient = true;
            break;
        }
        VectorXd component = eigenvectors.col(idx);
        Eigen::Index argmax = 0;
        component.cwiseAbs().maxCoeff(&argmax);
        if (component[argmax] < 0.0) component = -component;

        for (std::size_t j = 0; j < d; ++j) {
            model.components.push_back(static_cast<float>(component[static_cast<Eigen::Index>(j)]));
        }
        model.explained_variance.push_back(lambda);
        model.explained_variance_ratio.push_back(
            total_variance > 0.0 ? std::clamp(lambda / total_variance, 0.0, 1.0) : 0.0);
    }
    model.k = model.explained_variance.size();
    if (model.k == 0) throw_validation("pca: input has zero variance");
    return model;
}

DenseMatrix pca_transform(const PcaModel& model, const DenseMatrix& x) {
    if (x.cols != model.input_dim) {
        throw_validation("pca_transform: dimension mismatch (" + std::to_string(x.cols) + " vs " +
                         std::to_string(model.input_dim) + ")");
    }
    DenseMatrix out(x.rows, model.k);
    for (std::size_t i = 0; i < x.rows; ++i) {
        const float* row = x.row(i);
        for (std::size_t c = 0; c < model.k; ++c) {
            const float* comp = model.components.data() + c * model.input_dim;
            double acc = 0.0;
            for (std::size_t j = 0; j < model.input_dim; ++j) {
                acc += (static_cast<double>(row[j]) - static_cast<double>(model.mean[j])) *
                       static_cast<double>(comp[j]);
            }
            out.at(i, c) = static_cast<float>(acc);
        }
    }
    return out;
}

}  // namespace trxcat
