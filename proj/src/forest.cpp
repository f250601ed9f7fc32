#include <algorithm>
#include <cmath>
#include <numeric>

#include "trxcat/models.hpp"
#include "trxcat/rng.hpp"
#include "train_internal.hpp"

namespace trxcat {

std::int32_t Tree::walk(const FeatureMatrix& x, std::size_t row) const {
    std::int32_t node = 0;
    while (nodes[static_cast<std::size_t>(node)].feature >= 0) {
        const TreeNode& nd = nodes[static_cast<std::size_t>(node)];
        const double v = x.value_at(row, static_cast<std::size_t>(nd.feature));
        node = v <= nd.threshold ? nd.left : nd.right;
    }
    return nodes[static_cast<std::size_t>(node)].label;
}

namespace detail {

namespace {

struct SplitCandidate {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double impurity_decrease = 0.0;
};

double gini(const std::vector<std::size_t>& counts, double total) {
    double g = 1.0;
    for (std::size_t c : counts) {
        const double p = static_cast<double>(c) / total;
        g -= p * p;
    }
    return g;
}

class TreeBuilder {
public:
    TreeBuilder(const FeatureMatrix& x, const std::vector<std::int32_t>& y, std::size_t k,
                const ModelSpec& spec, Rng& rng)
        : x_(x), y_(y), k_(k), spec_(spec), rng_(rng) {
        mtry_ = static_cast<std::size_t>(
            std::max(1.0, std::floor(std::sqrt(static_cast<double>(x.cols())))));
    }

    Tree build(std::vector<std::size_t> samples) {
        Tree tree;
        grow(tree, std::move(samples), 0);
        return tree;
    }

private:
    const FeatureMatrix& x_;
    const std::vector<std::int32_t>& y_;
    std::size_t k_;
    const ModelSpec& spec_;
    Rng& rng_;
    std::size_t mtry_;

    std::vector<std::size_t> class_counts(const std::vector<std::size_t>& samples) const {
        std::vector<std::size_t> counts(k_, 0);
        for (std::size_t s : samples) ++counts[static_cast<std::size_t>(y_[s])];
        return counts;
    }

    std::int32_t majority(const std::vector<std::size_t>& counts) const {
        std::size_t best = 0;
        for (std::size_t c = 1; c < k_; ++c) {
            if (counts[c] > counts[best]) best = c;  // ties keep the lower index
        }
        return static_cast<std::int32_t>(best);
    }

    SplitCandidate best_split_on(const std::vector<std::size_t>& samples, std::size_t feature,
                                 double parent_gini) const {
        std::vector<std::pair<double, std::int32_t>> values;
        values.reserve(samples.size());
        for (std::size_t s : samples) {
            values.emplace_back(x_.value_at(s, feature), y_[s]);
        }
        std::sort(values.begin(), values.end());

        SplitCandidate best;
        const double total = static_cast<double>(values.size());
        std::vector<std::size_t> left_counts(k_, 0);
        std::vector<std::size_t> right_counts = class_counts(samples);

        for (std::size_t i = 0; i + 1 < values.size(); ++i) {
            ++left_counts[static_cast<std::size_t>(values[i].second)];
            --right_counts[static_cast<std::size_t>(values[i].second)];
            if (values[i].first == values[i + 1].first) continue;
            const std::size_t n_left = i + 1;
            const std::size_t n_right = values.size() - n_left;
            if (n_left < spec_.rf_min_leaf || n_right < spec_.rf_min_leaf) continue;
            const double decrease =
                parent_gini -
                (static_cast<double>(n_left) * gini(left_counts, static_cast<double>(n_left)) +
                 static_cast<double>(n_right) * gini(right_counts, static_cast<double>(n_right))) /
                    total;
            if (decrease > best.impurity_decrease + 1e-15) {
                best.found = true;
                best.feature = feature;
                best.threshold = (values[i].first + values[i + 1].first) / 2.0;
                best.impurity_decrease = decrease;
            }
        }
        return best;
    }

    SplitCandidate search_features(const std::vector<std::size_t>& samples, double parent_gini,
                                   bool all_features) const {
        SplitCandidate best;
        if (all_features) {
            for (std::size_t f = 0; f < x_.cols(); ++f) {
                SplitCandidate cand = best_split_on(samples, f, parent_gini);
                if (cand.found && cand.impurity_decrease > best.impurity_decrease + 1e-15) best = cand;
            }
            return best;
        }
        // sqrt(D) distinct features drawn without replacement
        std::vector<std::size_t> chosen;
        chosen.reserve(mtry_);
        while (chosen.size() < std::min(mtry_, x_.cols())) {
            std::size_t f = static_cast<std::size_t>(rng_.below(x_.cols()));
            if (std::find(chosen.begin(), chosen.end(), f) == chosen.end()) chosen.push_back(f);
        }
        for (std::size_t f : chosen) {
            SplitCandidate cand = best_split_on(samples, f, parent_gini);
            if (cand.found && cand.impurity_decrease > best.impurity_decrease + 1e-15) best = cand;
        }
        return best;
    }

    std::int32_t grow(Tree& tree, std::vector<std::size_t> samples, std::size_t depth) {
        const std::int32_t node_id = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.emplace_back();

        const std::vector<std::size_t> counts = class_counts(samples);
        const double parent_gini = gini(counts, static_cast<double>(samples.size()));

        const bool depth_capped = spec_.rf_max_depth > 0 && depth >= spec_.rf_max_depth;
        const bool pure = parent_gini <= 0.0;
        const bool too_small = samples.size() < 2 * spec_.rf_min_leaf;

        SplitCandidate split;
        if (!depth_capped && !pure && !too_small) {
            split = search_features(samples, parent_gini, false);
            // A sampled-feature draw can miss every informative column; fall
            // back to the full scan before giving up on an impure node.
            if (!split.found) split = search_features(samples, parent_gini, true);
        }

        if (!split.found) {
            tree.nodes[static_cast<std::size_t>(node_id)].label = majority(counts);
            return node_id;
        }

        std::vector<std::size_t> left, right;
        for (std::size_t s : samples) {
            (x_.value_at(s, split.feature) <= split.threshold ? left : right).push_back(s);
        }
        samples.clear();
        samples.shrink_to_fit();

        const std::int32_t left_id = grow(tree, std::move(left), depth + 1);
        const std::int32_t right_id = grow(tree, std::move(right), depth + 1);
        TreeNode& node = tree.nodes[static_cast<std::size_t>(node_id)];
        node.feature = static_cast<std::int32_t>(split.feature);
        node.threshold = split.threshold;
        node.left = left_id;
        node.right = right_id;
        return node_id;
    }
};

}  // namespace

void train_forest(const FeatureMatrix& x, const std::vector<std::int32_t>& y, std::size_t k,
                  TrainedModel& model) {
    const ModelSpec& spec = model.spec;
    const std::size_t n = x.rows();

    model.trees.reserve(spec.rf_trees);
    for (std::size_t t = 0; t < spec.rf_trees; ++t) {
        Rng rng = Rng::substream(spec.seed, t);
        std::vector<std::size_t> samples(n);
        if (spec.rf_trees == 1) {
            // A lone tree trains on the full sample; bagging starts at two.
            std::iota(samples.begin(), samples.end(), 0);
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                samples[i] = static_cast<std::size_t>(rng.below(n));
            }
        }
        TreeBuilder builder(x, y, k, spec, rng);
        model.trees.push_back(builder.build(std::move(samples)));
    }
}

}  // namespace detail

}  // namespace trxcat
