#include "trxcat/dataset_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "trxcat/error.hpp"
#include "trxcat/text.hpp"

namespace trxcat {

namespace {

using nlohmann::ordered_json;

void append_taxonomy(Dataset& dataset, const std::string& category) {
    if (category.empty()) return;
    if (!dataset.has_label(category)) dataset.taxonomy.push_back(category);
}

std::string row_context(const std::string& origin, std::size_t line) {
    return origin + ":" + std::to_string(line);
}

Transaction transaction_from_json(const ordered_json& row, const std::string& where) {
    auto require_string = [&](const char* field) -> std::string {
        if (!row.contains(field)) throw_schema(where + ": missing field '" + std::string(field) + "'");
        const auto& v = row.at(field);
        if (!v.is_string()) throw_schema(where + ": field '" + std::string(field) + "' must be a string");
        return v.get<std::string>();
    };
    Transaction t;
    t.id = require_string("id");
    t.description = require_string("description");
    if (trim(t.description).empty()) throw_schema(where + ": field 'description' is empty");
    try {
        t.value_cents = parse_cents(require_string("value"));
        t.date = parse_iso_date(require_string("date"));
    } catch (const Error& e) {
        if (std::string(e.what()).starts_with(where)) throw;
        throw_schema(where + ": " + e.what());
    }
    if (row.contains("category") && !row.at("category").is_null()) {
        if (!row.at("category").is_string()) throw_schema(where + ": field 'category' must be a string or null");
        t.category = row.at("category").get<std::string>();
    }
    return t;
}

// RFC 4180 style line splitting with quoted fields; descriptions carry
// commas and asterisks so plain splitting will not do.
std::vector<std::string> split_csv_row(const std::string& line, const std::string& where) {
    std::vector<std::string> fields;
    std::string cur;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c == '\r' && i + 1 == line.size()) {
            // tolerate CRLF
        } else {
            cur.push_back(c);
        }
    }
    if (in_quotes) throw_schema(where + ": unterminated quoted field");
    fields.push_back(cur);
    return fields;
}

Dataset read_csv(std::istream& in, const std::string& origin) {
    Dataset dataset;
    std::string line;
    if (!std::getline(in, line)) return dataset;  // empty file: zero records

    auto header = split_csv_row(line, row_context(origin, 1));
    std::vector<std::string> want = {"id", "description", "value", "date", "category"};
    std::size_t ncols = header.size();
    if (ncols < 4 || ncols > 5) {
        throw_schema(row_context(origin, 1) + ": expected columns id,description,value,date[,category]");
    }
    for (std::size_t i = 0; i < ncols; ++i) {
        if (trim(header[i]) != want[i]) {
            throw_schema(row_context(origin, 1) + ": column " + std::to_string(i) + " is '" + header[i] +
                         "', expected '" + want[i] + "'");
        }
    }

    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const std::string where = row_context(origin, lineno);
        auto fields = split_csv_row(line, where);
        if (fields.size() != ncols) {
            throw_schema(where + ": expected " + std::to_string(ncols) + " fields, got " +
                         std::to_string(fields.size()));
        }
        Transaction t;
        t.id = trim(fields[0]);
        if (t.id.empty()) throw_schema(where + ": field 'id' is empty");
        t.description = fields[1];
        if (trim(t.description).empty()) throw_schema(where + ": field 'description' is empty");
        try {
            t.value_cents = parse_cents(fields[2]);
            t.date = parse_iso_date(trim(fields[3]));
        } catch (const Error& e) {
            throw_schema(where + ": " + e.what());
        }
        if (ncols == 5) t.category = trim(fields[4]);
        append_taxonomy(dataset, t.category);
        dataset.records.push_back(std::move(t));
    }
    return dataset;
}

}  // namespace

DatasetFormat format_from_path(const std::string& path) {
    return path.ends_with(".csv") ? DatasetFormat::csv : DatasetFormat::jsonl;
}

Dataset dataset_from_jsonl(std::istream& in, const std::string& origin) {
    Dataset dataset;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const std::string where = row_context(origin, lineno);
        ordered_json row;
        try {
            row = ordered_json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw_schema(where + ": invalid JSON: " + e.what());
        }
        if (!row.is_object()) throw_schema(where + ": expected a JSON object");
        Transaction t = transaction_from_json(row, where);
        append_taxonomy(dataset, t.category);
        dataset.records.push_back(std::move(t));
    }
    return dataset;
}

Dataset read_dataset(const std::string& path, DatasetFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_io("cannot open dataset '" + path + "'");
    Dataset dataset =
        format == DatasetFormat::csv ? read_csv(in, path) : dataset_from_jsonl(in, path);
    validate_dataset(dataset);
    return dataset;
}

Dataset read_dataset(const std::string& path) {
    return read_dataset(path, format_from_path(path));
}

std::string dataset_to_jsonl(const Dataset& dataset) {
    std::string out;
    for (const Transaction& t : dataset.records) {
        ordered_json row;
        row["id"] = t.id;
        row["description"] = t.description;
        row["value"] = format_cents(t.value_cents);
        row["date"] = format_iso(t.date);
        if (t.category.empty()) {
            row["category"] = nullptr;
        } else {
            row["category"] = t.category;
        }
        out += row.dump();
        out += '\n';
    }
    return out;
}

void write_dataset_jsonl(const Dataset& dataset, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw_io("cannot write dataset '" + path + "'");
    out << dataset_to_jsonl(dataset);
    if (!out) throw_io("write failed for '" + path + "'");
}

}  // namespace trxcat
