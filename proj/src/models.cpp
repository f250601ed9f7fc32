#include "trxcat/models.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "trxcat/error.hpp"
#include "trxcat/metrics.hpp"
#include "trxcat/rng.hpp"
#include "train_internal.hpp"

namespace trxcat {

ModelKind parse_model_kind(const std::string& text) {
    if (text == "naive_bayes") return ModelKind::naive_bayes;
    if (text == "logistic_regression") return ModelKind::logistic_regression;
    if (text == "linear_svm") return ModelKind::linear_svm;
    if (text == "random_forest") return ModelKind::random_forest;
    throw_config("unknown model kind '" + text + "'");
}

std::string model_kind_to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::naive_bayes: return "naive_bayes";
        case ModelKind::logistic_regression: return "logistic_regression";
        case ModelKind::linear_svm: return "linear_svm";
        case ModelKind::random_forest: return "random_forest";
    }
    return "naive_bayes";
}

void ModelSpec::validate() const {
    if (!(nb_alpha > 0.0)) throw_config("naive bayes alpha must be positive");
    if (!(lr_lambda >= 0.0)) throw_config("logistic regression lambda must be non-negative");
    if (lr_epochs == 0 || lr_batch == 0) throw_config("logistic regression epochs/batch must be positive");
    if (!(lr_learning_rate > 0.0)) throw_config("logistic regression learning rate must be positive");
    if (!(svm_c > 0.0)) throw_config("svm C must be positive");
    if (svm_epochs == 0 || svm_batch == 0) throw_config("svm epochs/batch must be positive");
    if (!(svm_learning_rate > 0.0 && svm_learning_rate <= 0.9)) {
        throw_config("svm learning rate must lie in (0, 0.9]");
    }
    if (rf_trees == 0) throw_config("random forest needs at least one tree");
    if (rf_min_leaf == 0) throw_config("random forest min_leaf must be positive");
}

namespace {

std::pair<std::vector<std::string>, std::vector<std::int32_t>> encode_labels(
    const std::vector<std::string>& y) {
    std::set<std::string> distinct(y.begin(), y.end());
    std::vector<std::string> labels(distinct.begin(), distinct.end());
    std::map<std::string, std::int32_t> index;
    for (std::size_t i = 0; i < labels.size(); ++i) index[labels[i]] = static_cast<std::int32_t>(i);
    std::vector<std::int32_t> encoded;
    encoded.reserve(y.size());
    for (const auto& label : y) encoded.push_back(index.at(label));
    return {std::move(labels), std::move(encoded)};
}

}  // namespace

TrainedModel train(const FeatureMatrix& x, const std::vector<std::string>& y,
                   const ModelSpec& spec) {
    spec.validate();
    if (y.size() != x.rows()) {
        throw_validation("train: " + std::to_string(x.rows()) + " feature rows but " +
                         std::to_string(y.size()) + " labels");
    }
    if (!x.all_finite()) throw_validation("train: features contain non-finite values");

    TrainedModel model;
    model.spec = spec;
    model.feature_dim = x.cols();
    auto [labels, encoded] = encode_labels(y);
    model.labels = std::move(labels);
    if (model.labels.size() < 2) {
        throw_validation("train: need at least 2 distinct labels, got " +
                         std::to_string(model.labels.size()));
    }

    switch (spec.kind) {
        case ModelKind::naive_bayes:
            if (!x.all_non_negative()) {
                throw_validation("naive bayes requires non-negative features");
            }
            detail::train_naive_bayes(x, encoded, model.k(), model);
            break;
        case ModelKind::logistic_regression:
            detail::train_logistic(x, encoded, model.k(), model);
            break;
        case ModelKind::linear_svm:
            detail::train_svm(x, encoded, model.k(), model);
            break;
        case ModelKind::random_forest:
            if (spec.class_weight_balanced) {
                throw_config("class_weight balanced is not supported for random_forest");
            }
            detail::train_forest(x, encoded, model.k(), model);
            break;
    }
    return model;
}

std::vector<double> predict_scores(const TrainedModel& model, const FeatureMatrix& x) {
    if (x.cols() != model.feature_dim) {
        throw_validation("predict: feature dimension " + std::to_string(x.cols()) +
                         " does not match model dimension " + std::to_string(model.feature_dim));
    }
    const std::size_t n = x.rows();
    const std::size_t k = model.k();
    std::vector<double> scores(n * k, 0.0);

    switch (model.spec.kind) {
        case ModelKind::naive_bayes: {
            for (std::size_t i = 0; i < n; ++i) {
                double* row = scores.data() + i * k;
                for (std::size_t c = 0; c < k; ++c) row[c] = model.nb_log_prior[c];
                x.for_row(i, [&](std::uint32_t col, double v) {
                    for (std::size_t c = 0; c < k; ++c) {
                        row[c] += v * model.nb_log_likelihood[c * model.feature_dim + col];
                    }
                });
                // log joint -> posterior
                double max = *std::max_element(row, row + k);
                double sum = 0.0;
                for (std::size_t c = 0; c < k; ++c) {
                    row[c] = std::exp(row[c] - max);
                    sum += row[c];
                }
                for (std::size_t c = 0; c < k; ++c) row[c] /= sum;
            }
            break;
        }
        case ModelKind::logistic_regression:
        case ModelKind::linear_svm: {
            for (std::size_t i = 0; i < n; ++i) {
                double* row = scores.data() + i * k;
                for (std::size_t c = 0; c < k; ++c) row[c] = model.bias[c];
                x.for_row(i, [&](std::uint32_t col, double v) {
                    for (std::size_t c = 0; c < k; ++c) {
                        row[c] += v * model.weights[c * model.feature_dim + col];
                    }
                });
                if (model.spec.kind == ModelKind::logistic_regression) {
                    double max = *std::max_element(row, row + k);
                    double sum = 0.0;
                    for (std::size_t c = 0; c < k; ++c) {
                        row[c] = std::exp(row[c] - max);
                        sum += row[c];
                    }
                    for (std::size_t c = 0; c < k; ++c) row[c] /= sum;
                }
            }
            break;
        }
        case ModelKind::random_forest: {
            for (std::size_t i = 0; i < n; ++i) {
                double* row = scores.data() + i * k;
                for (const Tree& tree : model.trees) {
                    row[static_cast<std::size_t>(tree.walk(x, i))] += 1.0;
                }
                for (std::size_t c = 0; c < k; ++c) {
                    row[c] /= static_cast<double>(model.trees.size());
                }
            }
            break;
        }
    }
    return scores;
}

std::vector<std::string> predict(const TrainedModel& model, const FeatureMatrix& x) {
    std::vector<double> scores = predict_scores(model, x);
    const std::size_t k = model.k();
    std::vector<std::string> out;
    out.reserve(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const double* row = scores.data() + i * k;
        std::size_t best = 0;
        for (std::size_t c = 1; c < k; ++c) {
            if (row[c] > row[best]) best = c;  // ties keep the lower label index
        }
        out.push_back(model.labels[best]);
    }
    return out;
}

namespace {

// Tie preference: the smaller-capacity spec wins.
bool lower_capacity(const ModelSpec& a, const ModelSpec& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case ModelKind::linear_svm:
            if (a.svm_c != b.svm_c) return a.svm_c < b.svm_c;
            return a.svm_epochs < b.svm_epochs;
        case ModelKind::logistic_regression:
            if (a.lr_lambda != b.lr_lambda) return a.lr_lambda > b.lr_lambda;
            return a.lr_epochs < b.lr_epochs;
        case ModelKind::naive_bayes:
            return a.nb_alpha > b.nb_alpha;
        case ModelKind::random_forest:
            if (a.rf_trees != b.rf_trees) return a.rf_trees < b.rf_trees;
            return a.rf_max_depth != 0 && (b.rf_max_depth == 0 || a.rf_max_depth < b.rf_max_depth);
    }
    return false;
}

}  // namespace

std::vector<ModelSpec> default_grid(const ModelSpec& base) {
    std::vector<ModelSpec> grid;
    switch (base.kind) {
        case ModelKind::linear_svm:
            for (double c : {0.01, 0.1, 1.0, 10.0}) {
                for (std::size_t epochs : {std::size_t{10}, std::size_t{30}}) {
                    ModelSpec spec = base;
                    spec.svm_c = c;
                    spec.svm_epochs = epochs;
                    grid.push_back(spec);
                }
            }
            break;
        case ModelKind::logistic_regression:
            for (double lambda : {1e-5, 1e-4, 1e-3, 1e-2}) {
                ModelSpec spec = base;
                spec.lr_lambda = lambda;
                grid.push_back(spec);
            }
            break;
        case ModelKind::naive_bayes:
            for (double alpha : {0.1, 0.5, 1.0, 2.0}) {
                ModelSpec spec = base;
                spec.nb_alpha = alpha;
                grid.push_back(spec);
            }
            break;
        case ModelKind::random_forest:
            for (std::size_t trees : {std::size_t{20}, std::size_t{50}, std::size_t{100}}) {
                ModelSpec spec = base;
                spec.rf_trees = trees;
                grid.push_back(spec);
            }
            break;
    }
    return grid;
}

std::pair<ModelSpec, CvReport> grid_search(const FeatureMatrix& x,
                                           const std::vector<std::string>& y,
                                           const std::vector<ModelSpec>& grid, std::size_t folds,
                                           std::uint64_t seed) {
    if (grid.empty()) throw_validation("grid_search: empty grid");
    if (folds < 2) throw_validation("grid_search: need at least 2 folds");
    if (y.size() != x.rows()) throw_validation("grid_search: labels do not match feature rows");
    if (y.size() < folds) throw_validation("grid_search: fewer rows than folds");

    const std::size_t n = y.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);
    std::vector<std::size_t> fold_of(n);
    for (std::size_t i = 0; i < n; ++i) fold_of[order[i]] = i % folds;

    auto subset_features = [&](const std::vector<std::size_t>& rows) {
        if (x.is_sparse()) {
            const auto& m = x.sparse();
            SparseMatrix sub;
            sub.cols = m.cols;
            for (std::size_t r : rows) {
                auto cols_span = m.row_cols(r);
                auto vals_span = m.row_vals(r);
                std::vector<std::pair<std::uint32_t, double>> entries;
                entries.reserve(cols_span.size());
                for (std::size_t kk = 0; kk < cols_span.size(); ++kk) {
                    entries.emplace_back(cols_span[kk], vals_span[kk]);
                }
                sub.append_row(entries);
            }
            return FeatureMatrix(std::move(sub));
        }
        const auto& m = x.dense();
        DenseMatrix sub(rows.size(), m.cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            std::copy(m.row(rows[i]), m.row(rows[i]) + m.cols, sub.row(i));
        }
        return FeatureMatrix(std::move(sub));
    };

    CvReport report;
    report.mean_f1.assign(grid.size(), 0.0);

    for (std::size_t p = 0; p < grid.size(); ++p) {
        grid[p].validate();
        double sum = 0.0;
        std::size_t counted = 0;
        for (std::size_t f = 0; f < folds; ++f) {
            std::vector<std::size_t> train_rows, eval_rows;
            for (std::size_t i = 0; i < n; ++i) {
                (fold_of[i] == f ? eval_rows : train_rows).push_back(i);
            }
            CvCell cell{p, f, 0.0, false};
            std::set<std::string> train_classes;
            for (std::size_t i : train_rows) train_classes.insert(y[i]);
            if (train_rows.empty() || eval_rows.empty() || train_classes.size() < 2) {
                cell.degenerate = true;
            } else {
                std::vector<std::string> y_train, y_eval;
                for (std::size_t i : train_rows) y_train.push_back(y[i]);
                for (std::size_t i : eval_rows) y_eval.push_back(y[i]);
                TrainedModel model = train(subset_features(train_rows), y_train, grid[p]);
                auto predictions = predict(model, subset_features(eval_rows));
                cell.weighted_f1 = weighted_metrics(confusion(y_eval, predictions)).f1;
                sum += cell.weighted_f1;
                ++counted;
            }
            report.cells.push_back(cell);
        }
        report.mean_f1[p] = counted ? sum / static_cast<double>(counted) : 0.0;
    }

    std::size_t best = 0;
    for (std::size_t p = 1; p < grid.size(); ++p) {
        if (report.mean_f1[p] > report.mean_f1[best]) {
            best = p;
        } else if (report.mean_f1[p] == report.mean_f1[best] &&
                   lower_capacity(grid[p], grid[best])) {
            best = p;
        }
    }
    report.best_point = best;
    return {grid[best], report};
}

}  // namespace trxcat
