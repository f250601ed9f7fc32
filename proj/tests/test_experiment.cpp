#include <doctest.h>

#include "trxcat/experiment.hpp"
#include "trxcat/split.hpp"
#include "trxcat/synth.hpp"

using namespace trxcat;

namespace {

std::string config_path(const char* name) {
    return std::string(TRXCAT_SOURCE_DIR) + "/configs/" + name;
}

Dataset labeled_corpus(std::size_t n, std::uint64_t seed) {
    SynthConfig config = load_synth_config(config_path("synth.default.toml"));
    config.n_records = n;
    config.seed = seed;
    return generate_synthetic(config);
}

const CleaningConfig& cleaning() {
    static const CleaningConfig config =
        load_cleaning_config(config_path("cleaning.default.toml"));
    return config;
}

const NameDictionary& names() {
    static const NameDictionary dict = load_name_dictionary(config_path("names.sample.txt"));
    return dict;
}

}  // namespace

TEST_CASE("one fraction, one seed, one model gives one row") {
    Dataset corpus = labeled_corpus(600, 99);
    ExperimentPlan plan;
    plan.fractions = {0.8};
    plan.split_seeds = {1};
    ModelSpec spec;
    spec.kind = ModelKind::naive_bayes;
    plan.models = {{spec, false}};

    const auto result = run_experiment(corpus, cleaning(), names(), plan);
    REQUIRE(result.rows.size() == 1);
    CHECK(result.rows[0].fraction == 0.8);
    CHECK(result.rows[0].report.model_kind == "naive_bayes");
    CHECK(result.rows[0].report.metrics.f1 > 0.5);
    CHECK(result.rows[0].report.evaluated == 120);  // 600 - round(0.8 * 600)
}

TEST_CASE("rows multiply out over fractions, seeds and models") {
    Dataset corpus = labeled_corpus(600, 101);
    ExperimentPlan plan;
    plan.fractions = {0.8, 0.5};
    plan.split_seeds = {1, 2, 3};
    ModelSpec nb;
    nb.kind = ModelKind::naive_bayes;
    ModelSpec svm;
    svm.kind = ModelKind::linear_svm;
    svm.svm_epochs = 10;
    plan.models = {{nb, false}, {svm, false}};

    const auto result = run_experiment(corpus, cleaning(), names(), plan);
    CHECK(result.rows.size() == 2 * 3 * 2);
    CHECK(result.median_f1(0.8, "naive_bayes") > 0.0);

    const auto doc = result.to_json();
    const auto back = ExperimentResult::from_json(nlohmann::json::parse(doc.dump()));
    CHECK(back.to_json().dump() == doc.dump());

    const std::string table = render_summary_table(result);
    CHECK(table.find("linear_svm") != std::string::npos);
    CHECK(table.find("80%") != std::string::npos);
    CHECK(table.find("50%") != std::string::npos);

    const std::string per_cat = render_per_category_table(result.rows[0].report);
    CHECK(per_cat.find("Support") != std::string::npos);
}

TEST_CASE("featurizer state depends only on the training half") {
    // Deleting a token that only occurs in held-out records must leave
    // every training-side artifact byte-identical.
    Dataset corpus = labeled_corpus(400, 103);
    const std::uint64_t seed = 4;
    const double fraction = 0.8;

    auto [train_a, test_a] = split(corpus, fraction, seed);

    // Pick a held-out record and plant a unique token in it.
    Dataset modified = corpus;
    const std::string victim_id = test_a.records[0].id;
    for (auto& record : modified.records) {
        if (record.id == victim_id) record.description += " zzuniquetokenzz";
    }
    auto [train_b, test_b] = split(modified, fraction, seed);

    // identical split (same ids both sides)
    REQUIRE(train_a.size() == train_b.size());
    for (std::size_t i = 0; i < train_a.size(); ++i) {
        CHECK(train_a.records[i].id == train_b.records[i].id);
    }

    FeaturizerSpec feat;
    const auto docs_a = preprocess_dataset(train_a, cleaning(), names());
    const auto docs_b = preprocess_dataset(train_b, cleaning(), names());
    const Featurizer fa = Featurizer::fit(feat, docs_a);
    const Featurizer fb = Featurizer::fit(feat, docs_b);
    CHECK(fa.content_id() == fb.content_id());

    std::vector<std::string> y;
    for (const auto& record : train_a.records) y.push_back(record.category);
    ModelSpec spec;
    spec.kind = ModelKind::linear_svm;
    spec.svm_epochs = 5;
    TrainedModel ma = train(fa.transform(docs_a), y, spec);
    TrainedModel mb = train(fb.transform(docs_b), y, spec);
    CHECK(ma.weights == mb.weights);
    CHECK(ma.bias == mb.bias);
}

TEST_CASE("fine-tuned entries search the lattice and rename the row") {
    Dataset corpus = labeled_corpus(500, 107);
    ExperimentPlan plan;
    plan.fractions = {0.8};
    plan.split_seeds = {1};
    ModelSpec svm;
    svm.kind = ModelKind::linear_svm;
    svm.svm_epochs = 10;
    plan.models = {{svm, true}};

    const auto result = run_experiment(corpus, cleaning(), names(), plan);
    REQUIRE(result.rows.size() == 1);
    CHECK(result.rows[0].report.model_kind == "fine_tuned_linear_svm");
    CHECK(result.rows[0].report.metrics.f1 > 0.8);

    CHECK(default_grid(svm).size() == 8);  // 4 C values x 2 epoch settings
}

TEST_CASE("median over seeds is the middle order statistic") {
    ExperimentResult result;
    for (double f1 : {0.8, 0.9, 0.7}) {
        ExperimentRow row;
        row.fraction = 0.8;
        row.report.model_kind = "naive_bayes";
        row.report.metrics.f1 = f1;
        result.rows.push_back(row);
    }
    CHECK(result.median_f1(0.8, "naive_bayes") == 0.8);
}
