#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trxcat/synth.hpp"
#include "trxcat/transaction.hpp"

namespace trxcat {

struct CategoryRule {
    std::string category;
    std::vector<std::string> include;  // lowercase phrases, all must occur
    std::vector<std::string> exclude;  // none may occur
    SignConstraint sign = SignConstraint::any;
    int priority = 0;  // higher wins; ties go to file order
};

struct RuleSet {
    std::vector<CategoryRule> rules;

    void validate() const;  // include non-empty, include/exclude disjoint
};

RuleSet load_ruleset(const std::string& path);

// Matching happens on the raw description (lowercased, accent-folded),
// never on preprocessed tokens: every include phrase must occur as a
// substring, no exclude phrase may occur, and the value sign must satisfy
// the rule. Returns nullopt when no rule fires.
std::optional<std::string> apply_rules(const Transaction& tx, const RuleSet& rules);

struct CoverageReport {
    std::vector<std::pair<std::string, std::size_t>> per_category;  // label -> labeled count
    std::size_t total = 0;
    std::size_t unlabeled = 0;

    double unlabeled_fraction() const {
        return total == 0 ? 0.0 : static_cast<double>(unlabeled) / static_cast<double>(total);
    }
    std::string to_json() const;
};

// Fills in categories where a rule fires. Existing labels are kept unless
// `overwrite` is set. Labels produced by the rules extend the taxonomy.
std::pair<Dataset, CoverageReport> label_dataset(const Dataset& dataset, const RuleSet& rules,
                                                 bool overwrite = false);

}  // namespace trxcat
