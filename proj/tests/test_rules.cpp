#include <doctest.h>

#include "trxcat/error.hpp"
#include "trxcat/rules.hpp"
#include "trxcat/synth.hpp"

using namespace trxcat;

namespace {

Transaction tx(const std::string& description, std::int64_t cents) {
    return {"t0", description, cents, Date{2022, 11, 9}, ""};
}

CategoryRule rule(const std::string& category, std::vector<std::string> include,
                  std::vector<std::string> exclude, SignConstraint sign, int priority) {
    return {category, std::move(include), std::move(exclude), sign, priority};
}

RuleSet salary_rules() {
    RuleSet rules;
    rules.rules.push_back(
        rule("ADVANCE SALARY", {"avance", "salaire"}, {}, SignConstraint::income, 10));
    rules.rules.push_back(rule("SALARY", {"salaire"}, {}, SignConstraint::income, 5));
    return rules;
}

Dataset synth_corpus(std::size_t n, std::uint64_t seed) {
    SynthConfig config =
        load_synth_config(std::string(TRXCAT_SOURCE_DIR) + "/configs/synth.default.toml");
    config.n_records = n;
    config.seed = seed;
    return generate_synthetic(config);
}

}  // namespace

TEST_CASE("higher priority wins when both rules match") {
    const auto t = tx("virement en votre faveur avance salaires 10.2021 1000.0 carte numero 123",
                      100000);
    auto label = apply_rules(t, salary_rules());
    REQUIRE(label.has_value());
    CHECK(*label == "ADVANCE SALARY");
}

TEST_CASE("empty ruleset labels nothing") {
    CHECK_FALSE(apply_rules(tx("salaire", 100), RuleSet{}).has_value());
}

TEST_CASE("sign constraint blocks both income-only rules") {
    const auto t = tx("avance salaire", -5000);
    CHECK_FALSE(apply_rules(t, salary_rules()).has_value());
}

TEST_CASE("include phrases are conjunctive") {
    RuleSet rules;
    rules.rules.push_back(rule("X", {"alpha", "beta"}, {}, SignConstraint::any, 0));
    CHECK(apply_rules(tx("alpha beta gamma", -1), rules).has_value());
    CHECK_FALSE(apply_rules(tx("alpha gamma", -1), rules).has_value());
}

TEST_CASE("exclude phrase vetoes a match") {
    RuleSet rules;
    rules.rules.push_back(rule("X", {"virement"}, {"loyer"}, SignConstraint::any, 0));
    CHECK(apply_rules(tx("virement emis jean", -1), rules).has_value());
    CHECK_FALSE(apply_rules(tx("virement emis loyer", -1), rules).has_value());
}

TEST_CASE("matching is case-insensitive substring over raw text") {
    RuleSet rules;
    rules.rules.push_back(rule("X", {"salaire"}, {}, SignConstraint::any, 0));
    CHECK(apply_rules(tx("SALAIRES 10.2021", 1), rules).has_value());
    CHECK(apply_rules(tx("xxsalairexx", 1), rules).has_value());
}

TEST_CASE("equal priority falls back to file order") {
    RuleSet rules;
    rules.rules.push_back(rule("FIRST", {"token"}, {}, SignConstraint::any, 7));
    rules.rules.push_back(rule("SECOND", {"token"}, {}, SignConstraint::any, 7));
    auto label = apply_rules(tx("token", -1), rules);
    REQUIRE(label.has_value());
    CHECK(*label == "FIRST");
}

TEST_CASE("ruleset validation") {
    RuleSet rules;
    rules.rules.push_back(rule("X", {}, {}, SignConstraint::any, 0));
    CHECK_THROWS_AS(rules.validate(), Error);
    rules.rules[0].include = {"a"};
    rules.rules[0].exclude = {"a"};
    CHECK_THROWS_AS(rules.validate(), Error);
}

TEST_CASE("label_dataset on empty input gives an empty report") {
    auto [labeled, coverage] = label_dataset(Dataset{}, salary_rules());
    CHECK(labeled.size() == 0);
    CHECK(coverage.total == 0);
    CHECK(coverage.unlabeled == 0);
    CHECK(coverage.per_category.empty());
}

TEST_CASE("coverage counts partition the dataset") {
    Dataset corpus = synth_corpus(3000, 41);
    // strip generator truth so the rules do the labeling
    for (auto& record : corpus.records) record.category.clear();
    const RuleSet rules =
        load_ruleset(std::string(TRXCAT_SOURCE_DIR) + "/configs/rules.default.toml");
    auto [labeled, coverage] = label_dataset(corpus, rules);

    std::size_t labeled_sum = 0;
    for (const auto& [label, count] : coverage.per_category) labeled_sum += count;
    CHECK(labeled_sum + coverage.unlabeled == corpus.size());
    CHECK(coverage.total == corpus.size());
}

TEST_CASE("shipped rules label nearly all synthetic records") {
    Dataset corpus = synth_corpus(10000, 43);
    for (auto& record : corpus.records) record.category.clear();
    const RuleSet rules =
        load_ruleset(std::string(TRXCAT_SOURCE_DIR) + "/configs/rules.default.toml");
    auto [labeled, coverage] = label_dataset(corpus, rules);
    CHECK(coverage.unlabeled_fraction() <= 0.05);
}

TEST_CASE("existing labels survive unless overwrite is requested") {
    Dataset corpus;
    corpus.taxonomy = {"KEEP"};
    corpus.records.push_back({"a", "salaire mensuel", 100000, Date{2022, 3, 1}, "KEEP"});
    const RuleSet rules = salary_rules();

    auto [kept, cov1] = label_dataset(corpus, rules, false);
    CHECK(kept.records[0].category == "KEEP");

    auto [overwritten, cov2] = label_dataset(corpus, rules, true);
    CHECK(overwritten.records[0].category == "SALARY");
}

TEST_CASE("adding an exclude phrase never grows the match set") {
    Dataset corpus = synth_corpus(10000, 47);
    RuleSet base;
    base.rules.push_back(rule("X", {"virement"}, {}, SignConstraint::any, 0));
    RuleSet narrowed;
    narrowed.rules.push_back(rule("X", {"virement"}, {"salaire"}, SignConstraint::any, 0));

    std::size_t base_hits = 0, narrowed_hits = 0;
    for (const auto& record : corpus.records) {
        const bool b = apply_rules(record, base).has_value();
        const bool n = apply_rules(record, narrowed).has_value();
        base_hits += b;
        narrowed_hits += n;
        if (n) CHECK(b);  // narrowed matches are a subset
    }
    CHECK(narrowed_hits <= base_hits);
}

TEST_CASE("labeling reads raw text only") {
    // The same record must label identically however cleaning is set up;
    // rules never see preprocessed tokens.
    const auto t = tx("030522 cb****1234 carrefour city_name", -2955);
    const RuleSet rules =
        load_ruleset(std::string(TRXCAT_SOURCE_DIR) + "/configs/rules.default.toml");
    auto label = apply_rules(t, rules);
    REQUIRE(label.has_value());
    CHECK(*label == "GROCERIES");

    Transaction scrubbed = t;
    scrubbed.description = "CB CARREFOUR";  // what cleaning would keep
    auto label2 = apply_rules(scrubbed, rules);
    REQUIRE(label2.has_value());
    CHECK(*label2 == "GROCERIES");
}
