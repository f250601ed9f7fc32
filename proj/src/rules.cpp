#include "trxcat/rules.hpp"

#include <algorithm>
#include <map>

#include <json.hpp>

#include "trxcat/error.hpp"
#include "trxcat/text.hpp"
#include "trxcat/tomlmini.hpp"

namespace trxcat {

void RuleSet::validate() const {
    for (const auto& rule : rules) {
        if (rule.category.empty()) throw_config("rule with empty category");
        if (rule.include.empty()) {
            throw_config("rule for '" + rule.category + "': include list is empty");
        }
        for (const auto& inc : rule.include) {
            if (std::find(rule.exclude.begin(), rule.exclude.end(), inc) != rule.exclude.end()) {
                throw_config("rule for '" + rule.category + "': '" + inc +
                             "' is both included and excluded");
            }
        }
    }
}

RuleSet load_ruleset(const std::string& path) {
    nlohmann::json doc = load_config_file(path);
    RuleSet set;
    try {
        for (const auto& entry : doc.value("rules", nlohmann::json::array())) {
            CategoryRule rule;
            rule.category = entry.at("category").get<std::string>();
            for (const auto& phrase : entry.at("include")) {
                rule.include.push_back(fold_to_ascii(phrase.get<std::string>()));
            }
            for (const auto& phrase : entry.value("exclude", nlohmann::json::array())) {
                rule.exclude.push_back(fold_to_ascii(phrase.get<std::string>()));
            }
            rule.sign = parse_sign(entry.value("sign", std::string("any")));
            rule.priority = entry.value("priority", 0);
            set.rules.push_back(std::move(rule));
        }
    } catch (const nlohmann::json::exception& e) {
        throw_config("bad ruleset '" + path + "': " + e.what());
    }
    set.validate();
    return set;
}

namespace {

bool sign_ok(SignConstraint sign, std::int64_t value_cents) {
    switch (sign) {
        case SignConstraint::income: return value_cents > 0;
        case SignConstraint::expense: return value_cents < 0;
        case SignConstraint::any: return true;
    }
    return true;
}

bool rule_matches(const CategoryRule& rule, const std::string& folded_description,
                  std::int64_t value_cents) {
    if (!sign_ok(rule.sign, value_cents)) return false;
    for (const auto& phrase : rule.include) {
        if (!contains(folded_description, phrase)) return false;
    }
    for (const auto& phrase : rule.exclude) {
        if (contains(folded_description, phrase)) return false;
    }
    return true;
}

}  // namespace

std::optional<std::string> apply_rules(const Transaction& tx, const RuleSet& rules) {
    const std::string folded = fold_to_ascii(tx.description);
    const CategoryRule* best = nullptr;
    for (const auto& rule : rules.rules) {
        if (!rule_matches(rule, folded, tx.value_cents)) continue;
        if (best == nullptr || rule.priority > best->priority) best = &rule;
        // equal priority: earlier file order wins, so keep `best`
    }
    if (best == nullptr) return std::nullopt;
    return best->category;
}

std::pair<Dataset, CoverageReport> label_dataset(const Dataset& dataset, const RuleSet& rules,
                                                 bool overwrite) {
    Dataset out = dataset;
    CoverageReport report;
    report.total = dataset.records.size();

    std::map<std::string, std::size_t> counts;
    for (auto& record : out.records) {
        if (record.labeled() && !overwrite) {
            ++counts[record.category];
            continue;
        }
        auto label = apply_rules(record, rules);
        if (label.has_value()) {
            record.category = *label;
            if (!out.has_label(*label)) out.taxonomy.push_back(*label);
            ++counts[*label];
        } else {
            if (overwrite) record.category.clear();
            if (record.category.empty()) {
                ++report.unlabeled;
            } else {
                ++counts[record.category];
            }
        }
    }
    report.per_category.assign(counts.begin(), counts.end());
    return {std::move(out), std::move(report)};
}

std::string CoverageReport::to_json() const {
    nlohmann::ordered_json doc;
    doc["total"] = total;
    doc["unlabeled"] = unlabeled;
    doc["unlabeled_fraction"] = unlabeled_fraction();
    nlohmann::ordered_json cats = nlohmann::ordered_json::object();
    for (const auto& [label, count] : per_category) cats[label] = count;
    doc["per_category"] = cats;
    return doc.dump(2);
}

}  // namespace trxcat
