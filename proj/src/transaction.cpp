#include "trxcat/transaction.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <unordered_set>

#include "trxcat/error.hpp"
#include "trxcat/text.hpp"

namespace trxcat {

std::string format_cents(std::int64_t cents) {
    std::int64_t abs = cents < 0 ? -cents : cents;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%lld.%02lld", cents < 0 ? "-" : "",
                  static_cast<long long>(abs / 100), static_cast<long long>(abs % 100));
    return buf;
}

std::int64_t parse_cents(const std::string& text) {
    std::string s = trim(text);
    if (s.empty()) throw_schema("empty amount");
    std::size_t i = 0;
    bool negative = false;
    if (s[i] == '+' || s[i] == '-') {
        negative = (s[i] == '-');
        ++i;
    }
    std::int64_t whole = 0;
    std::size_t digits = 0;
    for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i, ++digits) {
        whole = whole * 10 + (s[i] - '0');
    }
    if (digits == 0) throw_schema("malformed amount '" + text + "'");
    std::int64_t cents = whole * 100;
    if (i < s.size()) {
        if (s[i] != '.') throw_schema("malformed amount '" + text + "'");
        ++i;
        std::string frac;
        for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i) frac.push_back(s[i]);
        if (i != s.size()) throw_schema("malformed amount '" + text + "'");
        // Round half away from zero on the third fraction digit.
        std::int64_t f = 0;
        if (!frac.empty()) {
            std::string first2 = frac.substr(0, 2);
            while (first2.size() < 2) first2.push_back('0');
            f = std::stoll(first2);
            if (frac.size() > 2 && frac[2] >= '5') ++f;
        }
        cents += f;
    }
    return negative ? -cents : cents;
}

bool Dataset::has_label(const std::string& category) const {
    return std::find(taxonomy.begin(), taxonomy.end(), category) != taxonomy.end();
}

void validate_dataset(const Dataset& dataset) {
    std::unordered_set<std::string> seen;
    seen.reserve(dataset.records.size());
    for (std::size_t i = 0; i < dataset.records.size(); ++i) {
        const Transaction& t = dataset.records[i];
        if (t.id.empty()) {
            throw_validation("record " + std::to_string(i) + ": empty id");
        }
        if (!seen.insert(t.id).second) {
            throw_validation("record " + std::to_string(i) + ": duplicate id '" + t.id + "'");
        }
        if (trim(t.description).empty()) {
            throw_validation("record " + std::to_string(i) + " (id '" + t.id + "'): empty description");
        }
        if (!is_valid_date(t.date)) {
            throw_validation("record " + std::to_string(i) + " (id '" + t.id + "'): invalid date");
        }
        if (!t.category.empty() && !dataset.has_label(t.category)) {
            throw_validation("record " + std::to_string(i) + " (id '" + t.id + "'): category '" +
                             t.category + "' not in taxonomy");
        }
    }
}

}  // namespace trxcat
