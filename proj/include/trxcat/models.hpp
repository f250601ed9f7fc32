#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trxcat/features.hpp"

namespace trxcat {

enum class ModelKind { naive_bayes, logistic_regression, linear_svm, random_forest };

ModelKind parse_model_kind(const std::string& text);
std::string model_kind_to_string(ModelKind kind);

struct ModelSpec {
    ModelKind kind = ModelKind::naive_bayes;
    std::uint64_t seed = 1;

    double nb_alpha = 1.0;  // Laplace smoothing

    double lr_lambda = 1e-4;       // l2 strength on weights (bias free)
    std::size_t lr_epochs = 40;
    std::size_t lr_batch = 64;
    double lr_learning_rate = 0.5; // linearly decayed

    double svm_c = 1.0;            // hinge objective carries 1/(2C) l2 term
    std::size_t svm_epochs = 30;
    std::size_t svm_batch = 64;
    double svm_learning_rate = 0.1;  // in (0, 0.9], linearly decayed

    std::size_t rf_trees = 50;
    std::size_t rf_max_depth = 0;  // 0 = unlimited
    std::size_t rf_min_leaf = 1;

    // Reweight samples by N/(K * class size). Off in all golden runs;
    // supported for LR/SVM (sample weights) and NB (uniform priors).
    bool class_weight_balanced = false;

    void validate() const;
};

struct TreeNode {
    std::int32_t feature = -1;   // -1 on leaves
    double threshold = 0.0;      // go left when x[feature] <= threshold
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::int32_t label = -1;     // majority class on leaves
};

struct Tree {
    std::vector<TreeNode> nodes;  // root at 0
    std::int32_t walk(const FeatureMatrix& x, std::size_t row) const;
};

struct TrainedModel {
    ModelSpec spec;
    std::vector<std::string> labels;  // class index -> label, sorted
    std::size_t feature_dim = 0;
    std::string featurizer_ref;       // content id binding model to featurizer

    // naive bayes
    std::vector<double> nb_log_prior;       // K
    std::vector<double> nb_log_likelihood;  // K x D

    // logistic regression / linear svm
    std::vector<double> weights;  // K x D
    std::vector<double> bias;     // K

    // random forest
    std::vector<Tree> trees;

    // per-epoch training objective (LR: regularized cross-entropy;
    // SVM: summed regularized hinge objective)
    std::vector<double> objective_curve;

    std::size_t k() const { return labels.size(); }
};

// Dispatches on spec.kind; deterministic given spec.seed. Throws
// Error(validation) on single-class input, non-finite features, or
// negative features with naive bayes.
TrainedModel train(const FeatureMatrix& x, const std::vector<std::string>& y,
                   const ModelSpec& spec);

std::vector<std::string> predict(const TrainedModel& model, const FeatureMatrix& x);

// Probabilities for NB/LR (rows sum to 1), margins for SVM, vote
// fractions for RF. Row-major N x K.
std::vector<double> predict_scores(const TrainedModel& model, const FeatureMatrix& x);

// Mean cross-entropy over `rows` plus lambda/2 ||W||^2 (bias
// unregularized); fills the analytic gradient when the out-params are
// given. The logistic trainer takes mini-batch steps of this objective.
// `sample_weights` (empty = all ones, else one weight per matrix row)
// scales each row's loss term.
double lr_objective_and_gradient(const FeatureMatrix& x, const std::vector<std::int32_t>& y,
                                 std::size_t k, const std::vector<double>& weights,
                                 const std::vector<double>& bias, double lambda,
                                 const std::vector<std::size_t>& rows,
                                 std::vector<double>* grad_weights, std::vector<double>* grad_bias,
                                 const std::vector<double>& sample_weights = {});

// Summed one-vs-rest regularized hinge objective: mean hinge losses plus
// ||W||^2 / (2C).
double svm_objective(const FeatureMatrix& x, const std::vector<std::int32_t>& y, std::size_t k,
                     const std::vector<double>& weights, const std::vector<double>& bias,
                     double c_reg, const std::vector<double>& sample_weights = {});

struct CvCell {
    std::size_t point = 0;
    std::size_t fold = 0;
    double weighted_f1 = 0.0;
    bool degenerate = false;  // a fold's training side had one class
};

struct CvReport {
    std::vector<CvCell> cells;        // |grid| x folds
    std::vector<double> mean_f1;      // per grid point, degenerate cells skipped
    std::size_t best_point = 0;
};

// K-fold cross-validated weighted F1 over the grid; ties go to the
// smaller-capacity point (smaller C, then larger lambda, then grid order).
// Folds are a deterministic shuffle of `seed`.
std::pair<ModelSpec, CvReport> grid_search(const FeatureMatrix& x,
                                           const std::vector<std::string>& y,
                                           const std::vector<ModelSpec>& grid, std::size_t folds,
                                           std::uint64_t seed);

// The stock fine-tuning lattice around `base`: linear svm sweeps
// C in {0.01, 0.1, 1, 10} x epochs in {10, 30}; logistic regression sweeps
// lambda in {1e-5..1e-2}; naive bayes sweeps alpha; random forest sweeps
// the tree count.
std::vector<ModelSpec> default_grid(const ModelSpec& base);

}  // namespace trxcat
