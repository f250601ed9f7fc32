#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trxcat/date.hpp"

namespace trxcat {

// Amounts are kept in integer cents so that serialization is byte-stable.
std::string format_cents(std::int64_t cents);

// Accepts "-29.55", "1000", "1000.0", "+2.5"; extra fraction digits are
// rounded half away from zero. Throws Error(schema) on malformed input.
std::int64_t parse_cents(const std::string& text);

struct Transaction {
    std::string id;
    std::string description;
    std::int64_t value_cents = 0;
    Date date;
    std::string category;  // empty = unlabeled

    bool labeled() const { return !category.empty(); }
    bool is_expense() const { return value_cents < 0; }
    bool is_income() const { return value_cents > 0; }
};

struct Dataset {
    std::vector<Transaction> records;
    std::vector<std::string> taxonomy;  // admissible labels, first-seen order

    std::size_t size() const { return records.size(); }
    bool has_label(const std::string& category) const;
};

// Checks id uniqueness, non-empty descriptions, labels within the taxonomy.
// Throws Error(validation) describing the first offending record.
void validate_dataset(const Dataset& dataset);

}  // namespace trxcat
