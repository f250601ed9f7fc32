#include "trxcat/features.hpp"

#include <algorithm>
#include <cmath>

namespace trxcat {

double FeatureMatrix::value_at(std::size_t r, std::size_t c) const {
    if (!is_sparse()) return dense().at(r, c);
    const auto& m = sparse();
    auto cols_span = m.row_cols(r);
    auto it = std::lower_bound(cols_span.begin(), cols_span.end(), static_cast<std::uint32_t>(c));
    if (it == cols_span.end() || *it != c) return 0.0;
    return m.row_vals(r)[static_cast<std::size_t>(it - cols_span.begin())];
}

bool FeatureMatrix::all_non_negative() const {
    if (is_sparse()) {
        return std::all_of(sparse().values.begin(), sparse().values.end(),
                           [](double v) { return v >= 0.0; });
    }
    return std::all_of(dense().data.begin(), dense().data.end(),
                       [](float v) { return v >= 0.0f; });
}

bool FeatureMatrix::all_finite() const {
    if (is_sparse()) {
        return std::all_of(sparse().values.begin(), sparse().values.end(),
                           [](double v) { return std::isfinite(v); });
    }
    return std::all_of(dense().data.begin(), dense().data.end(),
                       [](float v) { return std::isfinite(v); });
}

}  // namespace trxcat
