#pragma once

#include <cstdint>
#include <utility>

#include "trxcat/transaction.hpp"

namespace trxcat {

// Disjoint train/test partition with |train| = round(train_fraction * N).
// Stratified by category when every category group (the unlabeled records
// count as a group of their own) has at least two members; otherwise a
// plain shuffle. Per-class sizes come from largest-remainder allocation so
// the overall train size is exact. Deterministic in `seed`.
std::pair<Dataset, Dataset> split(const Dataset& dataset, double train_fraction,
                                  std::uint64_t seed);

}  // namespace trxcat
