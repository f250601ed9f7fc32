#pragma once

#include <cstdint>
#include <vector>

#include "trxcat/models.hpp"

namespace trxcat::detail {

// y holds class indices in [0, k). Each trainer fills the matching
// parameter block of `model` and appends to objective_curve.

void train_naive_bayes(const FeatureMatrix& x, const std::vector<std::int32_t>& y, std::size_t k,
                       TrainedModel& model);

void train_logistic(const FeatureMatrix& x, const std::vector<std::int32_t>& y, std::size_t k,
                    TrainedModel& model);

void train_svm(const FeatureMatrix& x, const std::vector<std::int32_t>& y, std::size_t k,
               TrainedModel& model);

void train_forest(const FeatureMatrix& x, const std::vector<std::int32_t>& y, std::size_t k,
                  TrainedModel& model);

}  // namespace trxcat::detail
