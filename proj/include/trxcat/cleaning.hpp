#pragma once

#include <regex>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "trxcat/transaction.hpp"

namespace trxcat {

struct TokenSequence {
    std::vector<std::string> tokens;
    std::string source_id;

    bool empty() const { return tokens.empty(); }
    std::size_t size() const { return tokens.size(); }
};

struct SynonymClass {
    std::string canonical;                            // single token
    std::vector<std::vector<std::string>> members;    // token phrases, canonical included
};

// Description cleaning, applied in fixed stages: accent folding and
// lowercasing; date, account, amount/currency and misc pattern removal (in
// that order, each list in declared order); punctuation `,;:/()*=` to
// spaces; whitespace tokenization; stop-word filtering; synonym classes
// rewritten to their canonical token, first occurrence only; duplicate
// tokens beyond the first dropped.
class CleaningConfig {
public:
    struct PatternSet {
        std::vector<std::string> sources;
        std::vector<std::regex> compiled;

        void add(const std::string& pattern);
        bool matches_anywhere(const std::string& text) const;
    };

    PatternSet date_patterns;
    PatternSet account_patterns;
    PatternSet amount_currency_patterns;
    PatternSet misc_patterns;
    std::unordered_set<std::string> stop_words;
    std::vector<SynonymClass> synonym_classes;

    void validate() const;  // synonym classes pairwise disjoint, tag-free
};

// TOML/JSON loader; `cities` entries are folded into one boundary-anchored
// alternation appended to misc_patterns.
CleaningConfig load_cleaning_config(const std::string& path);
CleaningConfig cleaning_config_from_json(const nlohmann::json& doc);

struct NameDictionary {
    std::unordered_set<std::string> names;  // folded lowercase
    std::string tag = "<name>";
};

// One name per line; blank lines and '#' comments ignored.
NameDictionary load_name_dictionary(const std::string& path, std::string tag = "<name>");

TokenSequence clean(const std::string& description, const CleaningConfig& config);

// Replaces dictionary names with the tag; runs of consecutive tags
// collapse to a single tag.
TokenSequence anonymize_names(const TokenSequence& tokens, const NameDictionary& dict);

std::vector<TokenSequence> preprocess_dataset(const Dataset& dataset, const CleaningConfig& config,
                                              const NameDictionary& dict);

}  // namespace trxcat
