#include "trxcat/metrics.hpp"

#include <unordered_map>

#include "trxcat/error.hpp"

namespace trxcat {

std::uint64_t ConfusionMatrix::total() const {
    std::uint64_t sum = 0;
    for (std::uint64_t c : counts) sum += c;
    return sum;
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t t) const {
    std::uint64_t sum = 0;
    for (std::size_t p = 0; p < k(); ++p) sum += at(t, p);
    return sum;
}

std::uint64_t ConfusionMatrix::col_sum(std::size_t p) const {
    std::uint64_t sum = 0;
    for (std::size_t t = 0; t < k(); ++t) sum += at(t, p);
    return sum;
}

ConfusionMatrix confusion(const std::vector<std::string>& y_true,
                          const std::vector<std::string>& y_pred) {
    if (y_true.size() != y_pred.size()) {
        throw_validation("confusion: label sequences differ in length (" +
                         std::to_string(y_true.size()) + " vs " + std::to_string(y_pred.size()) +
                         ")");
    }
    ConfusionMatrix m;
    std::unordered_map<std::string, std::size_t> index;
    auto intern = [&](const std::string& label) {
        auto [it, inserted] = index.try_emplace(label, m.labels.size());
        if (inserted) m.labels.push_back(label);
        return it->second;
    };
    for (const auto& label : y_true) intern(label);
    for (const auto& label : y_pred) intern(label);

    m.counts.assign(m.k() * m.k(), 0);
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        ++m.at(index.at(y_true[i]), index.at(y_pred[i]));
    }
    return m;
}

WeightedMetrics weighted_metrics(const ConfusionMatrix& m) {
    const std::uint64_t total = m.total();
    if (m.k() == 0 || total == 0) throw_validation("weighted_metrics: empty confusion matrix");

    WeightedMetrics out;
    double wp = 0.0, wr = 0.0, wf = 0.0;
    for (std::size_t c = 0; c < m.k(); ++c) {
        ClassMetrics cm;
        cm.label = m.labels[c];
        cm.support = m.row_sum(c);
        const std::uint64_t predicted = m.col_sum(c);
        const std::uint64_t hits = m.at(c, c);

        if (predicted == 0) {
            cm.zero_division = true;
        } else {
            cm.precision = static_cast<double>(hits) / static_cast<double>(predicted);
        }
        if (cm.support == 0) {
            cm.zero_division = true;
        } else {
            cm.recall = static_cast<double>(hits) / static_cast<double>(cm.support);
        }
        if (cm.precision + cm.recall > 0.0) {
            cm.f1 = 2.0 * cm.precision * cm.recall / (cm.precision + cm.recall);
        } else {
            cm.zero_division = true;
        }

        wp += static_cast<double>(cm.support) * cm.precision;
        wr += static_cast<double>(cm.support) * cm.recall;
        wf += static_cast<double>(cm.support) * cm.f1;
        out.zero_division = out.zero_division || cm.zero_division;
        out.per_class.push_back(std::move(cm));
    }
    out.precision = wp / static_cast<double>(total);
    out.recall = wr / static_cast<double>(total);
    out.f1 = wf / static_cast<double>(total);
    return out;
}

}  // namespace trxcat
