#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "trxcat/transaction.hpp"

namespace trxcat {

enum class SignConstraint { income, expense, any };

SignConstraint parse_sign(const std::string& text);
std::string sign_to_string(SignConstraint sign);

struct SynthCategory {
    std::string label;
    SignConstraint sign = SignConstraint::expense;
    double weight = 1.0;
    std::int64_t value_min_cents = 100;
    std::int64_t value_max_cents = 10000;
    std::vector<std::string> templates;
};

// Description templates use {placeholder} slots:
//   {date6} {date_slash} {date_dot} {month_dot}   record date renderings
//   {amount_fr} {amount_dot} {amount_eur}         record value renderings
//   {card4} {digits3} {postal} {ref}              generated tokens
//   {name} {surname}                              from the name dictionary
//   {city} {civility} {cc}                        from the matching lexicon
//   {lex:key}                                     from lexicon `key`
struct SynthConfig {
    std::uint64_t seed = 0;
    std::size_t n_records = 0;
    double duplicate_rate = 0.0;
    Date date_begin{2021, 12, 1};
    Date date_end{2023, 1, 31};
    std::vector<SynthCategory> categories;
    std::map<std::string, std::vector<std::string>> lexicons;
    std::vector<std::string> names;

    void validate() const;  // throws Error(config)
};

// Loads a TOML/JSON config; `names_file` is resolved relative to the
// config file and read one name per line.
SynthConfig load_synth_config(const std::string& path);

// Deterministic: the dataset is a pure function of the config. Records are
// drawn category-proportionally to the weights; a duplicate_rate fraction
// are perturbed copies of earlier records (names, cities, card digits,
// amounts and dates resampled; merchant and reference tokens kept).
Dataset generate_synthetic(const SynthConfig& config);

}  // namespace trxcat
