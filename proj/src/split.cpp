#include "trxcat/split.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "trxcat/error.hpp"
#include "trxcat/rng.hpp"

namespace trxcat {

namespace {

Dataset subset(const Dataset& dataset, const std::vector<std::size_t>& indices) {
    Dataset out;
    out.taxonomy = dataset.taxonomy;
    out.records.reserve(indices.size());
    std::vector<std::size_t> sorted = indices;
    std::sort(sorted.begin(), sorted.end());  // keep original record order
    for (std::size_t i : sorted) out.records.push_back(dataset.records[i]);
    return out;
}

}  // namespace

std::pair<Dataset, Dataset> split(const Dataset& dataset, double train_fraction,
                                  std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw_validation("train_fraction must lie in (0, 1)");
    }
    if (dataset.records.empty()) {
        throw_validation("cannot split an empty dataset");
    }

    const std::size_t n = dataset.records.size();
    const std::size_t train_target =
        static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(n) + 0.5));

    std::map<std::string, std::vector<std::size_t>> groups;  // ordered for determinism
    for (std::size_t i = 0; i < n; ++i) groups[dataset.records[i].category].push_back(i);

    bool stratify = true;
    for (const auto& [label, members] : groups) {
        if (members.size() < 2) {
            stratify = false;
            break;
        }
    }

    Rng rng(seed);
    std::vector<std::size_t> train_idx;
    train_idx.reserve(train_target);

    if (!stratify || groups.size() == 1) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(order);
        train_idx.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(train_target));
    } else {
        // Largest-remainder allocation: floor per group, then hand the
        // remaining seats to the biggest fractional parts (ties: bigger
        // group, then label order).
        struct Share {
            const std::string* label;
            std::vector<std::size_t>* members;
            std::size_t base;
            double remainder;
        };
        std::vector<Share> shares;
        std::size_t allocated = 0;
        for (auto& [label, members] : groups) {
            double exact = train_fraction * static_cast<double>(members.size());
            std::size_t base = static_cast<std::size_t>(std::floor(exact));
            base = std::min(base, members.size());
            shares.push_back({&label, &members, base, exact - std::floor(exact)});
            allocated += base;
        }
        std::vector<std::size_t> order(shares.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (shares[a].remainder != shares[b].remainder) return shares[a].remainder > shares[b].remainder;
            if (shares[a].members->size() != shares[b].members->size())
                return shares[a].members->size() > shares[b].members->size();
            return *shares[a].label < *shares[b].label;
        });
        std::size_t leftover = train_target > allocated ? train_target - allocated : 0;
        for (std::size_t k = 0; leftover > 0 && k < order.size(); ++k) {
            Share& s = shares[order[k]];
            if (s.base < s.members->size()) {
                ++s.base;
                --leftover;
            }
        }
        for (auto& s : shares) {
            rng.shuffle(*s.members);
            train_idx.insert(train_idx.end(), s.members->begin(),
                             s.members->begin() + static_cast<std::ptrdiff_t>(s.base));
        }
    }

    std::vector<bool> in_train(n, false);
    for (std::size_t i : train_idx) in_train[i] = true;
    std::vector<std::size_t> test_idx;
    test_idx.reserve(n - train_idx.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (!in_train[i]) test_idx.push_back(i);
    }

    return {subset(dataset, train_idx), subset(dataset, test_idx)};
}

}  // namespace trxcat
