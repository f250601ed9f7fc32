#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trxcat/metrics.hpp"
#include "trxcat/pipeline.hpp"

namespace trxcat {

struct EvaluationReport {
    std::string model_kind;
    std::string featurizer_desc;
    std::string featurizer_ref;
    std::string split_desc;
    std::uint64_t seed = 0;
    std::size_t evaluated = 0;
    WeightedMetrics metrics;

    nlohmann::ordered_json to_json() const;
    static EvaluationReport from_json(const nlohmann::json& doc);
};

EvaluationReport evaluate_model(const PipelineModel& model, const Dataset& test_set,
                                const std::string& split_desc, std::uint64_t seed);

struct ExperimentRow {
    double fraction = 0.0;
    std::uint64_t seed = 0;
    EvaluationReport report;
};

struct ExperimentResult {
    std::vector<ExperimentRow> rows;

    // Median weighted F1 over the seeds of one (fraction, model kind) cell.
    double median_f1(double fraction, const std::string& model_kind) const;

    nlohmann::ordered_json to_json() const;
    static ExperimentResult from_json(const nlohmann::json& doc);
};

struct ExperimentEntry {
    ModelSpec spec;
    // Cross-validated hyperparameter search on the training half before
    // the final fit; the report row is named "fine_tuned_<kind>".
    bool fine_tune = false;
};

struct ExperimentPlan {
    std::vector<double> fractions{0.8, 0.67, 0.5};
    std::vector<std::uint64_t> split_seeds{1};
    FeaturizerSpec featurizer;
    std::vector<ExperimentEntry> models;
};

// For every (fraction, split seed, model): split, preprocess, fit the
// featurizer on the training half only, train, and evaluate on the
// held-out half.
ExperimentResult run_experiment(const Dataset& labeled, const CleaningConfig& cleaning,
                                const NameDictionary& names, const ExperimentPlan& plan);

// Aligned text tables: a summary (train fraction x model -> weighted
// precision/recall/f1, medians over seeds) and a per-category section for
// the strongest row.
std::string render_summary_table(const ExperimentResult& result);
std::string render_per_category_table(const EvaluationReport& report);
std::string render_report_text(const EvaluationReport& report);

}  // namespace trxcat
