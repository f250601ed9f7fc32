#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace trxcat {

struct ConfusionMatrix {
    std::vector<std::string> labels;          // row/column order
    std::vector<std::uint64_t> counts;        // K x K, rows = true, cols = predicted

    std::size_t k() const { return labels.size(); }
    std::uint64_t at(std::size_t t, std::size_t p) const { return counts[t * k() + p]; }
    std::uint64_t& at(std::size_t t, std::size_t p) { return counts[t * k() + p]; }
    std::uint64_t total() const;
    std::uint64_t row_sum(std::size_t t) const;   // support of class t
    std::uint64_t col_sum(std::size_t p) const;
};

// Tallies true/predicted label pairs; the label order is the union of both
// sequences in first-appearance order (true side first).
ConfusionMatrix confusion(const std::vector<std::string>& y_true,
                          const std::vector<std::string>& y_pred);

struct ClassMetrics {
    std::string label;
    double precision = 0.0;  // 0 when the class is never predicted
    double recall = 0.0;     // 0 when the class has no support
    double f1 = 0.0;
    std::uint64_t support = 0;
    bool zero_division = false;  // some quotient above was 0/0
};

struct WeightedMetrics {
    double precision = 0.0;
    double recall = 0.0;  // equals plain accuracy
    double f1 = 0.0;
    std::vector<ClassMetrics> per_class;
    bool zero_division = false;  // any per-class flag set
};

// Support-weighted averages: metric = sum_k support_k * metric_k / total.
// Per-class precision/recall fall back to 0 on empty denominators, with the
// zero_division flag raised.
WeightedMetrics weighted_metrics(const ConfusionMatrix& m);

}  // namespace trxcat
