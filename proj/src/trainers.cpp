#include <algorithm>
#include <cmath>
#include <numeric>

#include "trxcat/error.hpp"
#include "trxcat/models.hpp"
#include "trxcat/rng.hpp"
#include "train_internal.hpp"

namespace trxcat {

double lr_objective_and_gradient(const FeatureMatrix& x, const std::vector<std::int32_t>& y,
                                 std::size_t k, const std::vector<double>& weights,
                                 const std::vector<double>& bias, double lambda,
                                 const std::vector<std::size_t>& rows,
                                 std::vector<double>* grad_weights, std::vector<double>* grad_bias,
                                 const std::vector<double>& sample_weights) {
    const std::size_t d = x.cols();
    if (grad_weights) grad_weights->assign(k * d, 0.0);
    if (grad_bias) grad_bias->assign(k, 0.0);

    std::vector<double> scores(k);
    double loss = 0.0;
    for (std::size_t r : rows) {
        const double sw = sample_weights.empty() ? 1.0 : sample_weights[r];
        for (std::size_t c = 0; c < k; ++c) scores[c] = bias[c];
        x.for_row(r, [&](std::uint32_t col, double v) {
            for (std::size_t c = 0; c < k; ++c) scores[c] += v * weights[c * d + col];
        });
        const double max = *std::max_element(scores.begin(), scores.end());
        double sum = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            scores[c] = std::exp(scores[c] - max);
            sum += scores[c];
        }
        const std::size_t truth = static_cast<std::size_t>(y[r]);
        loss -= sw * std::log(scores[truth] / sum);
        if (grad_weights) {
            for (std::size_t c = 0; c < k; ++c) {
                const double residual = sw * (scores[c] / sum - (c == truth ? 1.0 : 0.0));
                (*grad_bias)[c] += residual;
                x.for_row(r, [&](std::uint32_t col, double v) {
                    (*grad_weights)[c * d + col] += residual * v;
                });
            }
        }
    }
    const double inv_n = 1.0 / static_cast<double>(rows.size());
    loss *= inv_n;
    double reg = 0.0;
    for (double w : weights) reg += w * w;
    loss += 0.5 * lambda * reg;
    if (grad_weights) {
        for (std::size_t i = 0; i < grad_weights->size(); ++i) {
            (*grad_weights)[i] = (*grad_weights)[i] * inv_n + lambda * weights[i];
        }
        for (std::size_t c = 0; c < k; ++c) (*grad_bias)[c] *= inv_n;
    }
    return loss;
}

double svm_objective(const FeatureMatrix& x, const std::vector<std::int32_t>& y, std::size_t k,
                     const std::vector<double>& weights, const std::vector<double>& bias,
                     double c_reg, const std::vector<double>& sample_weights) {
    const std::size_t d = x.cols();
    const std::size_t n = x.rows();
    double objective = 0.0;
    std::vector<double> scores(k);
    for (std::size_t r = 0; r < n; ++r) {
        const double sw = sample_weights.empty() ? 1.0 : sample_weights[r];
        for (std::size_t c = 0; c < k; ++c) scores[c] = bias[c];
        x.for_row(r, [&](std::uint32_t col, double v) {
            for (std::size_t c = 0; c < k; ++c) scores[c] += v * weights[c * d + col];
        });
        for (std::size_t c = 0; c < k; ++c) {
            const double sign = (static_cast<std::size_t>(y[r]) == c) ? 1.0 : -1.0;
            objective += sw * std::max(0.0, 1.0 - sign * scores[c]) / static_cast<double>(n);
        }
    }
    double reg = 0.0;
    for (double w : weights) reg += w * w;
    return objective + reg / (2.0 * c_reg);
}

namespace detail {

namespace {

// N/(K * class count) per sample when the balanced option is on.
std::vector<double> balanced_weights(const std::vector<std::int32_t>& y, std::size_t k,
                                     bool enabled) {
    if (!enabled) return {};
    std::vector<double> class_count(k, 0.0);
    for (std::int32_t c : y) class_count[static_cast<std::size_t>(c)] += 1.0;
    const double n = static_cast<double>(y.size());
    std::vector<double> weights(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        weights[i] = n / (static_cast<double>(k) * class_count[static_cast<std::size_t>(y[i])]);
    }
    return weights;
}

}  // namespace

void train_naive_bayes(const FeatureMatrix& x, const std::vector<std::int32_t>& y, std::size_t k,
                       TrainedModel& model) {
    const std::size_t d = x.cols();
    const double alpha = model.spec.nb_alpha;

    std::vector<double> class_count(k, 0.0);
    std::vector<double> feature_sum(k * d, 0.0);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const std::size_t c = static_cast<std::size_t>(y[r]);
        class_count[c] += 1.0;
        x.for_row(r, [&](std::uint32_t col, double v) { feature_sum[c * d + col] += v; });
    }

    model.nb_log_prior.resize(k);
    model.nb_log_likelihood.resize(k * d);
    const double n = static_cast<double>(x.rows());
    for (std::size_t c = 0; c < k; ++c) {
        model.nb_log_prior[c] = model.spec.class_weight_balanced
                                    ? -std::log(static_cast<double>(k))
                                    : std::log(class_count[c] / n);
        double total = 0.0;
        for (std::size_t j = 0; j < d; ++j) total += feature_sum[c * d + j];
        const double denom = std::log(total + alpha * static_cast<double>(d));
        for (std::size_t j = 0; j < d; ++j) {
            model.nb_log_likelihood[c * d + j] = std::log(feature_sum[c * d + j] + alpha) - denom;
        }
    }
}

namespace {

// Weights kept as scale * v; the l2 shrink then costs O(1) per step
// instead of touching all K*D coordinates.
struct ScaledWeights {
    std::vector<double> v;
    double scale = 1.0;

    void shrink(double factor) {
        scale *= factor;
        if (scale < 1e-100) materialize();
    }
    void materialize() {
        for (double& w : v) w *= scale;
        scale = 1.0;
    }
};

}  // namespace

void train_logistic(const FeatureMatrix& x, const std::vector<std::int32_t>& y, std::size_t k,
                    TrainedModel& model) {
    const ModelSpec& spec = model.spec;
    const std::size_t d = x.cols();
    const std::size_t n = x.rows();

    ScaledWeights w;
    w.v.assign(k * d, 0.0);
    model.bias.assign(k, 0.0);

    Rng rng(spec.seed);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::size_t> all_rows = order;
    const std::vector<double> sw = balanced_weights(y, k, spec.class_weight_balanced);

    const std::size_t steps_per_epoch = (n + spec.lr_batch - 1) / spec.lr_batch;
    const double total_steps = static_cast<double>(steps_per_epoch * spec.lr_epochs);
    std::size_t step = 0;
    std::vector<double> probs(k);
    std::vector<double> residuals;  // per batch sample, k entries each

    model.weights.assign(k * d, 0.0);
    model.objective_curve.push_back(lr_objective_and_gradient(
        x, y, k, model.weights, model.bias, spec.lr_lambda, all_rows, nullptr, nullptr, sw));

    for (std::size_t epoch = 0; epoch < spec.lr_epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t start = 0; start < n; start += spec.lr_batch) {
            const std::size_t end = std::min(n, start + spec.lr_batch);
            const double batch = static_cast<double>(end - start);
            const double lr = spec.lr_learning_rate *
                              std::max(0.01, 1.0 - static_cast<double>(step) / total_steps);
            ++step;

            // Mini-batch step: all scores at the pre-step weights, then one
            // combined update.
            residuals.assign((end - start) * k, 0.0);
            for (std::size_t b = start; b < end; ++b) {
                const std::size_t r = order[b];
                for (std::size_t c = 0; c < k; ++c) probs[c] = model.bias[c];
                x.for_row(r, [&](std::uint32_t col, double v) {
                    for (std::size_t c = 0; c < k; ++c) probs[c] += w.scale * v * w.v[c * d + col];
                });
                const double max = *std::max_element(probs.begin(), probs.end());
                double sum = 0.0;
                for (std::size_t c = 0; c < k; ++c) {
                    probs[c] = std::exp(probs[c] - max);
                    sum += probs[c];
                }
                const std::size_t truth = static_cast<std::size_t>(y[r]);
                const double weight = sw.empty() ? 1.0 : sw[r];
                double* res = residuals.data() + (b - start) * k;
                for (std::size_t c = 0; c < k; ++c) {
                    res[c] = weight * (probs[c] / sum - (c == truth ? 1.0 : 0.0));
                }
            }

            w.shrink(1.0 - lr * spec.lr_lambda);
            for (std::size_t b = start; b < end; ++b) {
                const std::size_t r = order[b];
                const double* res = residuals.data() + (b - start) * k;
                for (std::size_t c = 0; c < k; ++c) model.bias[c] -= lr * res[c] / batch;
                const double factor = lr / (batch * w.scale);
                x.for_row(r, [&](std::uint32_t col, double v) {
                    for (std::size_t c = 0; c < k; ++c) {
                        w.v[c * d + col] -= factor * res[c] * v;
                    }
                });
            }
        }
        w.materialize();
        model.weights = w.v;
        model.objective_curve.push_back(lr_objective_and_gradient(
            x, y, k, model.weights, model.bias, spec.lr_lambda, all_rows, nullptr, nullptr, sw));
    }
    w.materialize();
    model.weights = std::move(w.v);
}

void train_svm(const FeatureMatrix& x, const std::vector<std::int32_t>& y, std::size_t k,
               TrainedModel& model) {
    const ModelSpec& spec = model.spec;
    const std::size_t d = x.cols();
    const std::size_t n = x.rows();

    // One-vs-rest over a shared sample stream, all classes stepped per
    // batch. The step size C*lr0*decay keeps the l2 shrink factor at
    // 1 - lr0*decay, which validate() bounds away from zero.
    std::vector<ScaledWeights> w(k);
    for (auto& sw : w) sw.v.assign(d, 0.0);
    model.bias.assign(k, 0.0);

    Rng rng(spec.seed);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    const std::vector<double> sw = balanced_weights(y, k, spec.class_weight_balanced);

    const std::size_t steps_per_epoch = (n + spec.svm_batch - 1) / spec.svm_batch;
    const double total_steps = static_cast<double>(steps_per_epoch * spec.svm_epochs);
    std::size_t step = 0;
    std::vector<double> margins;  // per batch sample, k entries each

    model.weights.assign(k * d, 0.0);
    model.objective_curve.push_back(
        svm_objective(x, y, k, model.weights, model.bias, spec.svm_c, sw));

    for (std::size_t epoch = 0; epoch < spec.svm_epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t start = 0; start < n; start += spec.svm_batch) {
            const std::size_t end = std::min(n, start + spec.svm_batch);
            const double batch = static_cast<double>(end - start);
            const double lr = spec.svm_c * spec.svm_learning_rate *
                              std::max(0.01, 1.0 - static_cast<double>(step) / total_steps);
            ++step;

            margins.assign((end - start) * k, 0.0);
            for (std::size_t b = start; b < end; ++b) {
                const std::size_t r = order[b];
                double* m = margins.data() + (b - start) * k;
                for (std::size_t c = 0; c < k; ++c) m[c] = model.bias[c];
                x.for_row(r, [&](std::uint32_t col, double v) {
                    for (std::size_t c = 0; c < k; ++c) m[c] += w[c].scale * v * w[c].v[col];
                });
            }

            for (std::size_t c = 0; c < k; ++c) w[c].shrink(1.0 - lr / spec.svm_c);
            for (std::size_t b = start; b < end; ++b) {
                const std::size_t r = order[b];
                const double* m = margins.data() + (b - start) * k;
                const double weight = sw.empty() ? 1.0 : sw[r];
                for (std::size_t c = 0; c < k; ++c) {
                    const double sign = (static_cast<std::size_t>(y[r]) == c) ? 1.0 : -1.0;
                    if (sign * m[c] < 1.0) {
                        const double g = weight * lr * sign / batch;
                        model.bias[c] += g;
                        const double factor = g / w[c].scale;
                        x.for_row(r, [&](std::uint32_t col, double v) {
                            w[c].v[col] += factor * v;
                        });
                    }
                }
            }
        }

        model.weights.assign(k * d, 0.0);
        for (std::size_t c = 0; c < k; ++c) {
            for (std::size_t j = 0; j < d; ++j) model.weights[c * d + j] = w[c].scale * w[c].v[j];
        }
        model.objective_curve.push_back(
            svm_objective(x, y, k, model.weights, model.bias, spec.svm_c, sw));
    }
}

}  // namespace detail

}  // namespace trxcat
