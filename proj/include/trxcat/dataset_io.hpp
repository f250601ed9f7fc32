#pragma once

#include <iosfwd>
#include <string>

#include "trxcat/transaction.hpp"

namespace trxcat {

enum class DatasetFormat { jsonl, csv };

// Chosen from the file extension (.csv -> csv, anything else -> jsonl).
DatasetFormat format_from_path(const std::string& path);

// Reads a dataset, preserving record order. Malformed rows raise
// Error(schema) naming the row and field; duplicate ids raise
// Error(validation). The taxonomy is the set of distinct labels in
// first-seen order.
Dataset read_dataset(const std::string& path, DatasetFormat format);
Dataset read_dataset(const std::string& path);  // format from extension

// Canonical on-disk form: one JSON object per line, fixed key order,
// amounts as 2-fraction-digit decimal strings.
void write_dataset_jsonl(const Dataset& dataset, const std::string& path);
std::string dataset_to_jsonl(const Dataset& dataset);
Dataset dataset_from_jsonl(std::istream& in, const std::string& origin);

}  // namespace trxcat
