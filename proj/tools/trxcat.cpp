#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "trxcat/dataset_io.hpp"
#include "trxcat/error.hpp"
#include "trxcat/experiment.hpp"
#include "trxcat/manifest.hpp"
#include "trxcat/pipeline.hpp"
#include "trxcat/rules.hpp"
#include "trxcat/similarity.hpp"
#include "trxcat/split.hpp"
#include "trxcat/synth.hpp"
#include "trxcat/tomlmini.hpp"

namespace fs = std::filesystem;
using namespace trxcat;

namespace {

std::string default_config(const char* name) {
    const char* env = std::getenv("TRXCAT_CONFIG_DIR");
    if (env) return (fs::path(env) / name).string();
    if (fs::exists(fs::path("configs") / name)) {
        return (fs::path("configs") / name).string();
    }
    // repo layout relative to the binary (build/tools/trxcat)
    std::error_code ec;
    fs::path exe = fs::read_symlink("/proc/self/exe", ec);
    if (!ec) {
        for (const char* up : {"../..", "../../.."}) {
            fs::path candidate = exe.parent_path() / up / "configs" / name;
            if (fs::exists(candidate)) return candidate.lexically_normal().string();
        }
    }
    return (fs::path("configs") / name).string();
}

void write_text(const std::string& path, const std::string& text) {
    if (auto parent = fs::path(path).parent_path(); !parent.empty()) {
        fs::create_directories(parent);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw_io("cannot write '" + path + "'");
    out << text;
    if (!out) throw_io("write failed for '" + path + "'");
}

std::string tokens_to_jsonl(const std::vector<TokenSequence>& docs) {
    std::string out;
    for (const auto& doc : docs) {
        nlohmann::ordered_json row;
        row["id"] = doc.source_id;
        row["tokens"] = doc.tokens;
        out += row.dump();
        out += '\n';
    }
    return out;
}

struct CommonOptions {
    std::optional<std::uint64_t> seed;
};

ModelSpec model_spec_from_config(const std::string& kind, const nlohmann::json& doc,
                                 std::optional<std::uint64_t> seed_flag) {
    ModelSpec spec;
    spec.kind = parse_model_kind(kind);
    spec.seed = resolve_seed(seed_flag, doc.value("seed", spec.seed));
    spec.nb_alpha = doc.value("alpha", spec.nb_alpha);
    spec.lr_lambda = doc.value("lambda", spec.lr_lambda);
    spec.svm_c = doc.value("c", spec.svm_c);
    spec.class_weight_balanced = doc.value("class_weight", std::string("none")) == "balanced";
    switch (spec.kind) {
        case ModelKind::logistic_regression:
            spec.lr_epochs = doc.value("epochs", spec.lr_epochs);
            spec.lr_batch = doc.value("batch", spec.lr_batch);
            spec.lr_learning_rate = doc.value("learning_rate", spec.lr_learning_rate);
            break;
        case ModelKind::linear_svm:
            spec.svm_epochs = doc.value("epochs", spec.svm_epochs);
            spec.svm_batch = doc.value("batch", spec.svm_batch);
            spec.svm_learning_rate = doc.value("learning_rate", spec.svm_learning_rate);
            break;
        case ModelKind::random_forest:
            spec.rf_trees = doc.value("trees", spec.rf_trees);
            spec.rf_max_depth = doc.value("max_depth", spec.rf_max_depth);
            spec.rf_min_leaf = doc.value("min_leaf", spec.rf_min_leaf);
            break;
        case ModelKind::naive_bayes:
            break;
    }
    spec.validate();
    return spec;
}

int run_synth(const std::string& config_path, const std::string& out_path,
              std::optional<std::uint64_t> seed_flag, std::optional<std::size_t> n_flag) {
    SynthConfig config = load_synth_config(config_path);
    config.seed = resolve_seed(seed_flag, config.seed);
    if (n_flag.has_value()) config.n_records = *n_flag;

    Dataset dataset = generate_synthetic(config);
    write_dataset_jsonl(dataset, out_path);

    RunManifest manifest;
    manifest.command = "synth";
    manifest.seed = config.seed;
    manifest.add_config(config_path);
    manifest.outputs.push_back(out_path);
    manifest.write_for(out_path);

    std::printf("wrote %zu records to %s\n", dataset.size(), out_path.c_str());
    return 0;
}

int run_preprocess(const std::string& cleaning_path, const std::string& names_path,
                   const std::string& in_path, const std::string& out_path) {
    const CleaningConfig cleaning = load_cleaning_config(cleaning_path);
    const NameDictionary names = load_name_dictionary(names_path);
    const Dataset dataset = read_dataset(in_path);
    const auto docs = preprocess_dataset(dataset, cleaning, names);
    write_text(out_path, tokens_to_jsonl(docs));

    RunManifest manifest;
    manifest.command = "preprocess";
    manifest.add_config(cleaning_path);
    manifest.add_config(names_path);
    manifest.add_input(in_path);
    manifest.outputs.push_back(out_path);
    manifest.write_for(out_path);

    std::printf("preprocessed %zu records into %s\n", docs.size(), out_path.c_str());
    return 0;
}

int run_dedup(const std::string& in_path, const std::string& out_path,
              const std::string& report_path, double threshold, std::size_t block_rows,
              const std::string& cleaning_path, const std::string& names_path) {
    const CleaningConfig cleaning = load_cleaning_config(cleaning_path);
    const NameDictionary names = load_name_dictionary(names_path);
    const Dataset dataset = read_dataset(in_path);
    const auto docs = preprocess_dataset(dataset, cleaning, names);

    auto [kept, report] = dedup(dataset, docs, threshold, block_rows);
    write_dataset_jsonl(kept, out_path);
    if (!report_path.empty()) write_text(report_path, report.to_jsonl());

    RunManifest manifest;
    manifest.command = "dedup";
    manifest.add_config(cleaning_path);
    manifest.add_config(names_path);
    manifest.add_input(in_path);
    manifest.outputs.push_back(out_path);
    if (!report_path.empty()) manifest.outputs.push_back(report_path);
    manifest.write_for(out_path);

    std::printf("kept %zu of %zu records (%zu dropped) in %.2fs\n", kept.size(), dataset.size(),
                report.drops.size(), report.seconds);
    return 0;
}

int run_label(const std::string& rules_path, const std::string& in_path,
              const std::string& out_path, const std::string& report_path, bool force) {
    const RuleSet rules = load_ruleset(rules_path);
    const Dataset dataset = read_dataset(in_path);
    auto [labeled, coverage] = label_dataset(dataset, rules, force);
    write_dataset_jsonl(labeled, out_path);
    if (!report_path.empty()) write_text(report_path, coverage.to_json() + "\n");

    RunManifest manifest;
    manifest.command = "label";
    manifest.add_config(rules_path);
    manifest.add_input(in_path);
    manifest.outputs.push_back(out_path);
    if (!report_path.empty()) manifest.outputs.push_back(report_path);
    manifest.write_for(out_path);

    std::printf("labeled %zu records, %zu unlabeled (%.2f%%)\n", coverage.total,
                coverage.unlabeled, coverage.unlabeled_fraction() * 100.0);
    return 0;
}

FeaturizerSpec featurizer_spec_from(const std::string& kind, const std::string& spec_path,
                                    std::optional<std::uint64_t> seed_flag) {
    nlohmann::json doc = nlohmann::json::object();
    if (!spec_path.empty()) {
        nlohmann::json file = load_config_file(spec_path);
        doc = file.contains("featurizer") ? file.at("featurizer") : file;
    }
    doc["kind"] = kind;
    FeaturizerSpec spec = FeaturizerSpec::from_json(doc);
    spec.w2v.seed = resolve_seed(seed_flag, spec.w2v.seed);
    return spec;
}

int run_featurize(const std::string& kind, const std::string& spec_path,
                  const std::string& cleaning_path, const std::string& names_path,
                  const std::string& in_path, const std::string& out_path,
                  const std::string& matrix_path, std::optional<std::uint64_t> seed_flag) {
    const FeaturizerSpec spec = featurizer_spec_from(kind, spec_path, seed_flag);
    const CleaningConfig cleaning = load_cleaning_config(cleaning_path);
    const NameDictionary names = load_name_dictionary(names_path);
    const Dataset dataset = read_dataset(in_path);
    const auto docs = preprocess_dataset(dataset, cleaning, names);

    const Featurizer featurizer = Featurizer::fit(spec, docs);
    ContainerWriter writer("trxcat.featurizer");
    featurizer.save_into(writer);
    writer.write(out_path);

    if (!matrix_path.empty()) {
        const FeatureMatrix matrix = featurizer.transform(docs);
        ContainerWriter mw("trxcat.features");
        mw.meta()["featurizer_ref"] = featurizer.content_id();
        if (matrix.is_sparse()) {
            const auto& m = matrix.sparse();
            std::vector<std::int32_t> offsets(m.row_offsets.begin(), m.row_offsets.end());
            std::vector<std::int32_t> cols(m.col_indices.begin(), m.col_indices.end());
            mw.meta()["rows"] = m.rows;
            mw.meta()["cols"] = m.cols;
            mw.add_i32("csr.row_offsets", {offsets.size()}, offsets);
            mw.add_i32("csr.col_indices", {cols.size()}, cols);
            mw.add_f64("csr.values", {m.values.size()}, m.values);
        } else {
            const auto& m = matrix.dense();
            mw.add_f32("dense", {m.rows, m.cols}, m.data);
        }
        mw.write(matrix_path);
    }

    RunManifest manifest;
    manifest.command = "featurize";
    manifest.add_config(cleaning_path);
    manifest.add_config(names_path);
    if (!spec_path.empty()) manifest.add_config(spec_path);
    manifest.add_input(in_path);
    manifest.outputs.push_back(out_path);
    if (!matrix_path.empty()) manifest.outputs.push_back(matrix_path);
    manifest.write_for(out_path);

    std::printf("fitted %s on %zu docs -> %s\n", spec.describe().c_str(), docs.size(),
                out_path.c_str());
    return 0;
}

int run_train(const std::string& model_kind, const std::string& features_kind,
              const std::string& spec_path, const std::string& cleaning_path,
              const std::string& names_path, const std::string& in_path,
              const std::string& out_path, bool fine_tune,
              std::optional<std::uint64_t> seed_flag) {
    nlohmann::json model_doc = nlohmann::json::object();
    if (!spec_path.empty()) {
        nlohmann::json file = load_config_file(spec_path);
        model_doc = file.contains("model") ? file.at("model") : file;
    }
    const FeaturizerSpec feat_spec = featurizer_spec_from(features_kind, spec_path, seed_flag);
    const ModelSpec model_spec = model_spec_from_config(model_kind, model_doc, seed_flag);

    const Dataset dataset = read_dataset(in_path);
    const PipelineModel model =
        train_pipeline(dataset, cleaning_path, names_path, feat_spec, model_spec, fine_tune);
    model.save(out_path);

    RunManifest manifest;
    manifest.command = "train";
    manifest.seed = model_spec.seed;
    manifest.add_config(cleaning_path);
    manifest.add_config(names_path);
    if (!spec_path.empty()) manifest.add_config(spec_path);
    manifest.add_input(in_path);
    manifest.outputs.push_back(out_path);
    manifest.write_for(out_path);

    std::printf("trained %s on %s -> %s (featurizer %s)\n", model_kind.c_str(), in_path.c_str(),
                out_path.c_str(), model.classifier.featurizer_ref.c_str());
    return 0;
}

int run_evaluate(const std::string& model_path, const std::string& test_path,
                 const std::string& report_path) {
    const PipelineModel model = PipelineModel::load(model_path);
    const Dataset test_set = read_dataset(test_path);
    const EvaluationReport report =
        evaluate_model(model, test_set, "test=" + test_path, model.classifier.spec.seed);
    if (!report_path.empty()) write_text(report_path, report.to_json().dump(2) + "\n");

    RunManifest manifest;
    manifest.command = "evaluate";
    manifest.seed = model.classifier.spec.seed;
    manifest.add_input(model_path);
    manifest.add_input(test_path);
    if (!report_path.empty()) {
        manifest.outputs.push_back(report_path);
        manifest.write_for(report_path);
    }

    std::fputs(render_report_text(report).c_str(), stdout);
    return 0;
}

int run_predict(const std::string& model_path, const std::string& in_path,
                const std::string& out_path) {
    const PipelineModel model = PipelineModel::load(model_path);
    Dataset dataset = read_dataset(in_path);
    const auto predictions = model.predict_dataset(dataset);
    for (std::size_t i = 0; i < dataset.records.size(); ++i) {
        dataset.records[i].category = predictions[i];
        if (!dataset.has_label(predictions[i])) dataset.taxonomy.push_back(predictions[i]);
    }
    write_dataset_jsonl(dataset, out_path);

    RunManifest manifest;
    manifest.command = "predict";
    manifest.seed = model.classifier.spec.seed;
    manifest.add_input(model_path);
    manifest.add_input(in_path);
    manifest.outputs.push_back(out_path);
    manifest.write_for(out_path);

    std::printf("predicted %zu records -> %s\n", dataset.size(), out_path.c_str());
    return 0;
}

int run_experiment_cmd(const std::string& config_path, const std::string& in_flag,
                       const std::string& out_dir, std::optional<std::uint64_t> seed_flag) {
    const nlohmann::json doc = load_config_file(config_path);
    const fs::path base = fs::path(config_path).parent_path();
    auto resolve = [&](const std::string& p) {
        return fs::path(p).is_absolute() ? p : (base / p).string();
    };

    std::string corpus_path = in_flag;
    if (corpus_path.empty() && doc.contains("corpus")) {
        corpus_path = resolve(doc.at("corpus").get<std::string>());
    }
    if (corpus_path.empty()) {
        throw_config("experiment: no corpus (set --in or the config's `corpus` key)");
    }
    const std::string cleaning_path =
        resolve(doc.value("cleaning", std::string("cleaning.default.toml")));
    const std::string names_path = resolve(doc.value("names", std::string("names.sample.txt")));

    ExperimentPlan plan;
    if (doc.contains("fractions")) plan.fractions = doc.at("fractions").get<std::vector<double>>();
    if (doc.contains("split_seeds")) {
        plan.split_seeds = doc.at("split_seeds").get<std::vector<std::uint64_t>>();
    }
    plan.featurizer = FeaturizerSpec::from_json(
        doc.contains("featurizer") ? doc.at("featurizer") : nlohmann::json::object());
    const std::uint64_t base_seed = resolve_seed(seed_flag, doc.value("seed", std::uint64_t{42}));
    plan.featurizer.w2v.seed = base_seed;
    for (const auto& entry : doc.value("models", nlohmann::json::array())) {
        ModelSpec spec =
            model_spec_from_config(entry.at("kind").get<std::string>(), entry, std::nullopt);
        if (!entry.contains("seed")) spec.seed = base_seed;
        plan.models.push_back({spec, entry.value("fine_tune", false)});
    }

    const CleaningConfig cleaning = load_cleaning_config(cleaning_path);
    const NameDictionary names = load_name_dictionary(names_path);
    const Dataset corpus = read_dataset(corpus_path);

    const ExperimentResult result = run_experiment(corpus, cleaning, names, plan);

    fs::create_directories(out_dir);
    const std::string results_path = (fs::path(out_dir) / "results.json").string();
    write_text(results_path, result.to_json().dump(2) + "\n");

    std::string tables = render_summary_table(result);
    const ExperimentRow* best = nullptr;
    for (const auto& row : result.rows) {
        if (best == nullptr || row.report.metrics.f1 > best->report.metrics.f1) best = &row;
    }
    if (best != nullptr) {
        tables += "\nBest row (" + best->report.model_kind + ", " + best->report.split_desc +
                  "):\n\n";
        tables += render_per_category_table(best->report);
    }
    const std::string tables_path = (fs::path(out_dir) / "tables.txt").string();
    write_text(tables_path, tables);

    RunManifest manifest;
    manifest.command = "experiment";
    manifest.seed = base_seed;
    manifest.add_config(config_path);
    manifest.add_config(cleaning_path);
    manifest.add_config(names_path);
    manifest.add_input(corpus_path);
    manifest.outputs.push_back(results_path);
    manifest.outputs.push_back(tables_path);
    manifest.write_for(results_path);

    std::fputs(tables.c_str(), stdout);
    return 0;
}

int run_report(const std::string& in_path, const std::string& out_path) {
    std::ifstream in(in_path);
    if (!in) throw_io("cannot open report '" + in_path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw_schema("'" + in_path + "' is not valid JSON: " + e.what());
    }

    std::string text;
    if (doc.contains("rows")) {
        const ExperimentResult result = ExperimentResult::from_json(doc);
        text = render_summary_table(result);
    } else {
        text = render_report_text(EvaluationReport::from_json(doc));
    }
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        write_text(out_path, text);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bank transaction classification pipeline"};
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed_flag;
    app.add_option("--seed", seed_flag,
                   "Seed override (precedence: flag > TRXCAT_SEED env > config)");

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic transaction corpus");
    std::string synth_config = default_config("synth.default.toml");
    std::string synth_out = "corpus.jsonl";
    std::optional<std::size_t> synth_n;
    synth->add_option("--config", synth_config, "Synthesis config (TOML/JSON)");
    synth->add_option("--out", synth_out, "Output corpus (JSONL)");
    synth->add_option("--n", synth_n, "Record count override");

    // preprocess
    auto* preprocess = app.add_subcommand("preprocess", "Clean and anonymize descriptions");
    std::string pre_cleaning = default_config("cleaning.default.toml");
    std::string pre_names = default_config("names.sample.txt");
    std::string pre_in, pre_out = "tokens.jsonl";
    preprocess->add_option("--cleaning", pre_cleaning, "Cleaning config");
    preprocess->add_option("--names", pre_names, "Name dictionary (one per line)");
    preprocess->add_option("--in", pre_in, "Input corpus")->required();
    preprocess->add_option("--out", pre_out, "Output token sequences (JSONL)");

    // dedup
    auto* dedup_cmd = app.add_subcommand("dedup", "Drop near-duplicate records");
    std::string dd_in, dd_out = "deduped.jsonl", dd_report;
    double dd_threshold = 0.85;
    std::size_t dd_block_rows = 1024;
    std::string dd_cleaning = default_config("cleaning.default.toml");
    std::string dd_names = default_config("names.sample.txt");
    dedup_cmd->add_option("--in", dd_in, "Input corpus")->required();
    dedup_cmd->add_option("--out", dd_out, "Output corpus");
    dedup_cmd->add_option("--report", dd_report, "Drop report (JSONL)");
    dedup_cmd->add_option("--threshold", dd_threshold, "Cosine threshold in (0, 1]");
    dedup_cmd->add_option("--block-rows", dd_block_rows, "Rows per multiplication block");
    dedup_cmd->add_option("--cleaning", dd_cleaning, "Cleaning config");
    dedup_cmd->add_option("--names", dd_names, "Name dictionary");

    // label
    auto* label = app.add_subcommand("label", "Apply keyword rules to raw descriptions");
    std::string lb_rules = default_config("rules.default.toml");
    std::string lb_in, lb_out = "labeled.jsonl", lb_report;
    bool lb_force = false;
    label->add_option("--rules", lb_rules, "Ruleset (TOML/JSON)");
    label->add_option("--in", lb_in, "Input corpus")->required();
    label->add_option("--out", lb_out, "Output corpus");
    label->add_option("--report", lb_report, "Coverage report (JSON)");
    label->add_flag("--force", lb_force, "Overwrite existing labels");

    // featurize
    auto* featurize = app.add_subcommand("featurize", "Fit a featurizer on a corpus");
    std::string fz_kind = "ngram-tfidf", fz_spec, fz_in, fz_out = "featurizer.bin", fz_matrix;
    std::string fz_cleaning = default_config("cleaning.default.toml");
    std::string fz_names = default_config("names.sample.txt");
    featurize->add_option("--features", fz_kind, "ngram-tfidf | word2vec-pca");
    featurize->add_option("--spec", fz_spec, "Featurizer parameters (TOML/JSON)");
    featurize->add_option("--cleaning", fz_cleaning, "Cleaning config");
    featurize->add_option("--names", fz_names, "Name dictionary");
    featurize->add_option("--in", fz_in, "Input corpus")->required();
    featurize->add_option("--out", fz_out, "Featurizer artifact");
    featurize->add_option("--matrix", fz_matrix, "Also write the transformed matrix here");

    // train
    auto* train_cmd = app.add_subcommand("train", "Train a classifier end to end");
    std::string tr_model = "linear_svm", tr_features = "ngram-tfidf", tr_spec;
    std::string tr_cleaning = default_config("cleaning.default.toml");
    std::string tr_names = default_config("names.sample.txt");
    std::string tr_in, tr_out = "model.bin";
    bool tr_fine_tune = false;
    train_cmd->add_option("--model", tr_model,
                          "naive_bayes | logistic_regression | linear_svm | random_forest");
    train_cmd->add_option("--features", tr_features, "ngram-tfidf | word2vec-pca");
    train_cmd->add_option("--spec", tr_spec, "Hyperparameters (TOML/JSON)");
    train_cmd->add_option("--cleaning", tr_cleaning, "Cleaning config");
    train_cmd->add_option("--names", tr_names, "Name dictionary");
    train_cmd->add_option("--in", tr_in, "Labeled corpus")->required();
    train_cmd->add_option("--out", tr_out, "Model artifact");
    train_cmd->add_flag("--fine-tune", tr_fine_tune,
                        "Cross-validated hyperparameter search before the final fit");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Score a model on a labeled test set");
    std::string ev_model, ev_test, ev_report = "report.json";
    evaluate->add_option("--model", ev_model, "Model artifact")->required();
    evaluate->add_option("--test", ev_test, "Labeled test corpus")->required();
    evaluate->add_option("--report", ev_report, "Evaluation report (JSON)");

    // predict
    auto* predict_cmd = app.add_subcommand("predict", "Label new records with a trained model");
    std::string pd_model, pd_in, pd_out = "predictions.jsonl";
    predict_cmd->add_option("--model", pd_model, "Model artifact")->required();
    predict_cmd->add_option("--in", pd_in, "Input corpus")->required();
    predict_cmd->add_option("--out", pd_out, "Output corpus with predicted categories");

    // experiment
    auto* experiment_cmd =
        app.add_subcommand("experiment", "Train-fraction sweep over models and seeds");
    std::string ex_config, ex_in, ex_out = "results";
    experiment_cmd->add_option("--config", ex_config, "Experiment config (TOML/JSON)")->required();
    experiment_cmd->add_option("--in", ex_in, "Labeled corpus (overrides config `corpus`)");
    experiment_cmd->add_option("--out", ex_out, "Output directory");

    // report
    auto* report_cmd = app.add_subcommand("report", "Render a JSON report as text tables");
    std::string rp_in, rp_out;
    report_cmd->add_option("--in", rp_in, "results.json or report.json")->required();
    report_cmd->add_option("--out", rp_out, "Output file (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (synth->parsed()) return run_synth(synth_config, synth_out, seed_flag, synth_n);
        if (preprocess->parsed()) return run_preprocess(pre_cleaning, pre_names, pre_in, pre_out);
        if (dedup_cmd->parsed()) {
            return run_dedup(dd_in, dd_out, dd_report, dd_threshold, dd_block_rows, dd_cleaning,
                             dd_names);
        }
        if (label->parsed()) return run_label(lb_rules, lb_in, lb_out, lb_report, lb_force);
        if (featurize->parsed()) {
            return run_featurize(fz_kind, fz_spec, fz_cleaning, fz_names, fz_in, fz_out, fz_matrix,
                                 seed_flag);
        }
        if (train_cmd->parsed()) {
            return run_train(tr_model, tr_features, tr_spec, tr_cleaning, tr_names, tr_in, tr_out,
                             tr_fine_tune, seed_flag);
        }
        if (evaluate->parsed()) return run_evaluate(ev_model, ev_test, ev_report);
        if (predict_cmd->parsed()) return run_predict(pd_model, pd_in, pd_out);
        if (experiment_cmd->parsed()) {
            return run_experiment_cmd(ex_config, ex_in, ex_out, seed_flag);
        }
        if (report_cmd->parsed()) return run_report(rp_in, rp_out);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "unexpected error: %s\n", e.what());
        return 2;
    }
    return 1;
}
