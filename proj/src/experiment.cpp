#include "trxcat/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "trxcat/error.hpp"
#include "trxcat/split.hpp"

namespace trxcat {

nlohmann::ordered_json EvaluationReport::to_json() const {
    nlohmann::ordered_json doc;
    doc["model"] = model_kind;
    doc["featurizer"] = featurizer_desc;
    doc["featurizer_ref"] = featurizer_ref;
    doc["split"] = split_desc;
    doc["seed"] = seed;
    doc["evaluated"] = evaluated;
    doc["weighted"] = {{"precision", metrics.precision},
                       {"recall", metrics.recall},
                       {"f1", metrics.f1}};
    doc["zero_division"] = metrics.zero_division;
    nlohmann::ordered_json per_class = nlohmann::ordered_json::array();
    for (const auto& cm : metrics.per_class) {
        per_class.push_back({{"category", cm.label},
                             {"precision", cm.precision},
                             {"recall", cm.recall},
                             {"f1", cm.f1},
                             {"support", cm.support},
                             {"zero_division", cm.zero_division}});
    }
    doc["per_category"] = std::move(per_class);
    return doc;
}

EvaluationReport EvaluationReport::from_json(const nlohmann::json& doc) {
    EvaluationReport report;
    try {
        report.model_kind = doc.at("model").get<std::string>();
        report.featurizer_desc = doc.value("featurizer", std::string());
        report.featurizer_ref = doc.value("featurizer_ref", std::string());
        report.split_desc = doc.value("split", std::string());
        report.seed = doc.value("seed", std::uint64_t{0});
        report.evaluated = doc.value("evaluated", std::size_t{0});
        report.metrics.precision = doc.at("weighted").at("precision").get<double>();
        report.metrics.recall = doc.at("weighted").at("recall").get<double>();
        report.metrics.f1 = doc.at("weighted").at("f1").get<double>();
        report.metrics.zero_division = doc.value("zero_division", false);
        for (const auto& entry : doc.value("per_category", nlohmann::json::array())) {
            ClassMetrics cm;
            cm.label = entry.at("category").get<std::string>();
            cm.precision = entry.at("precision").get<double>();
            cm.recall = entry.at("recall").get<double>();
            cm.f1 = entry.at("f1").get<double>();
            cm.support = entry.at("support").get<std::uint64_t>();
            cm.zero_division = entry.value("zero_division", false);
            report.metrics.per_class.push_back(std::move(cm));
        }
    } catch (const nlohmann::json::exception& e) {
        throw_schema(std::string("bad evaluation report: ") + e.what());
    }
    return report;
}

EvaluationReport evaluate_model(const PipelineModel& model, const Dataset& test_set,
                                const std::string& split_desc, std::uint64_t seed) {
    Dataset labeled;
    labeled.taxonomy = test_set.taxonomy;
    for (const auto& record : test_set.records) {
        if (record.labeled()) labeled.records.push_back(record);
    }
    if (labeled.records.empty()) {
        throw_validation("evaluation set has no labeled records");
    }
    std::vector<std::string> y_true;
    y_true.reserve(labeled.records.size());
    for (const auto& record : labeled.records) y_true.push_back(record.category);
    const auto y_pred = model.predict_dataset(labeled);

    EvaluationReport report;
    report.model_kind = model_kind_to_string(model.classifier.spec.kind);
    report.featurizer_desc = model.featurizer.spec.describe();
    report.featurizer_ref = model.classifier.featurizer_ref;
    report.split_desc = split_desc;
    report.seed = seed;
    report.evaluated = labeled.records.size();
    report.metrics = weighted_metrics(confusion(y_true, y_pred));
    return report;
}

double ExperimentResult::median_f1(double fraction, const std::string& model_kind) const {
    std::vector<double> values;
    for (const auto& row : rows) {
        if (row.fraction == fraction && row.report.model_kind == model_kind) {
            values.push_back(row.report.metrics.f1);
        }
    }
    if (values.empty()) throw_validation("no experiment rows for the requested cell");
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) return values[mid];
    return 0.5 * (values[mid - 1] + values[mid]);
}

nlohmann::ordered_json ExperimentResult::to_json() const {
    nlohmann::ordered_json doc;
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        nlohmann::ordered_json entry;
        entry["fraction"] = row.fraction;
        entry["seed"] = row.seed;
        entry["report"] = row.report.to_json();
        arr.push_back(std::move(entry));
    }
    doc["rows"] = std::move(arr);
    return doc;
}

ExperimentResult ExperimentResult::from_json(const nlohmann::json& doc) {
    ExperimentResult result;
    for (const auto& entry : doc.at("rows")) {
        ExperimentRow row;
        row.fraction = entry.at("fraction").get<double>();
        row.seed = entry.at("seed").get<std::uint64_t>();
        row.report = EvaluationReport::from_json(entry.at("report"));
        result.rows.push_back(std::move(row));
    }
    return result;
}

ExperimentResult run_experiment(const Dataset& labeled, const CleaningConfig& cleaning,
                                const NameDictionary& names, const ExperimentPlan& plan) {
    if (plan.models.empty()) throw_validation("experiment plan has no models");
    for (double f : plan.fractions) {
        if (!(f > 0.0 && f < 1.0)) throw_validation("experiment fractions must lie in (0, 1)");
    }

    Dataset usable;
    usable.taxonomy = labeled.taxonomy;
    for (const auto& record : labeled.records) {
        if (record.labeled()) usable.records.push_back(record);
    }
    if (usable.records.empty()) throw_validation("experiment corpus has no labeled records");

    // Cleaning is per-record pure, so run it once and index by id.
    const auto all_docs = preprocess_dataset(usable, cleaning, names);
    std::unordered_map<std::string, std::size_t> doc_of;
    doc_of.reserve(all_docs.size());
    for (std::size_t i = 0; i < all_docs.size(); ++i) doc_of.emplace(usable.records[i].id, i);

    auto docs_for = [&](const Dataset& part) {
        std::vector<TokenSequence> docs;
        docs.reserve(part.records.size());
        for (const auto& record : part.records) docs.push_back(all_docs[doc_of.at(record.id)]);
        return docs;
    };

    ExperimentResult result;
    for (double fraction : plan.fractions) {
        for (std::uint64_t seed : plan.split_seeds) {
            auto [train_set, test_set] = split(usable, fraction, seed);
            const auto train_docs = docs_for(train_set);
            const auto test_docs = docs_for(test_set);

            const Featurizer featurizer = Featurizer::fit(plan.featurizer, train_docs);
            const FeatureMatrix x_train = featurizer.transform(train_docs);
            const FeatureMatrix x_test = featurizer.transform(test_docs);

            std::vector<std::string> y_train, y_true;
            for (const auto& record : train_set.records) y_train.push_back(record.category);
            for (const auto& record : test_set.records) y_true.push_back(record.category);

            char split_desc[64];
            std::snprintf(split_desc, sizeof(split_desc), "train=%g%% seed=%llu", fraction * 100.0,
                          static_cast<unsigned long long>(seed));

            for (const ExperimentEntry& entry : plan.models) {
                ModelSpec spec = entry.spec;
                if (entry.fine_tune) {
                    auto [best, cv_report] =
                        grid_search(x_train, y_train, default_grid(spec), 3, seed);
                    spec = best;
                }
                TrainedModel model = train(x_train, y_train, spec);
                model.featurizer_ref = featurizer.content_id();
                const auto y_pred = predict(model, x_test);

                ExperimentRow row;
                row.fraction = fraction;
                row.seed = seed;
                row.report.model_kind = (entry.fine_tune ? "fine_tuned_" : "") +
                                        model_kind_to_string(spec.kind);
                row.report.featurizer_desc = plan.featurizer.describe();
                row.report.featurizer_ref = model.featurizer_ref;
                row.report.split_desc = split_desc;
                row.report.seed = seed;
                row.report.evaluated = test_set.records.size();
                row.report.metrics = weighted_metrics(confusion(y_true, y_pred));
                result.rows.push_back(std::move(row));
            }
        }
    }
    return result;
}

namespace {

std::string pad(const std::string& text, std::size_t width) {
    std::string out = text;
    while (out.size() < width) out.push_back(' ');
    return out;
}

std::string percent(double v) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%.2f%%", v * 100.0);
    return buf;
}

}  // namespace

std::string render_summary_table(const ExperimentResult& result) {
    std::vector<double> fractions;
    std::vector<std::string> models;
    for (const auto& row : result.rows) {
        if (std::find(fractions.begin(), fractions.end(), row.fraction) == fractions.end()) {
            fractions.push_back(row.fraction);
        }
        if (std::find(models.begin(), models.end(), row.report.model_kind) == models.end()) {
            models.push_back(row.report.model_kind);
        }
    }

    std::string out;
    out += pad("Train", 8) + pad("Model", 24) + pad("Precision", 11) + pad("Recall", 11) + "F1\n";
    out += std::string(60, '-') + "\n";
    for (double fraction : fractions) {
        for (const auto& model : models) {
            std::vector<const ExperimentRow*> cell;
            for (const auto& row : result.rows) {
                if (row.fraction == fraction && row.report.model_kind == model) {
                    cell.push_back(&row);
                }
            }
            if (cell.empty()) continue;
            auto median_of = [&](auto getter) {
                std::vector<double> values;
                for (const auto* row : cell) values.push_back(getter(*row));
                std::sort(values.begin(), values.end());
                const std::size_t mid = values.size() / 2;
                return values.size() % 2 == 1 ? values[mid]
                                              : 0.5 * (values[mid - 1] + values[mid]);
            };
            char frac[16];
            std::snprintf(frac, sizeof(frac), "%g%%", fraction * 100.0);
            out += pad(frac, 8) + pad(model, 24) +
                   pad(percent(median_of([](const ExperimentRow& r) { return r.report.metrics.precision; })), 11) +
                   pad(percent(median_of([](const ExperimentRow& r) { return r.report.metrics.recall; })), 11) +
                   percent(median_of([](const ExperimentRow& r) { return r.report.metrics.f1; })) + "\n";
        }
    }
    return out;
}

std::string render_per_category_table(const EvaluationReport& report) {
    std::vector<const ClassMetrics*> order;
    for (const auto& cm : report.metrics.per_class) order.push_back(&cm);
    std::sort(order.begin(), order.end(), [](const ClassMetrics* a, const ClassMetrics* b) {
        if (a->support != b->support) return a->support > b->support;
        return a->label < b->label;
    });

    std::string out;
    out += pad("Category", 24) + pad("Precision", 11) + pad("Recall", 11) + pad("F1", 11) +
           "Support\n";
    out += std::string(64, '-') + "\n";
    for (const auto* cm : order) {
        out += pad(cm->label, 24) + pad(percent(cm->precision), 11) + pad(percent(cm->recall), 11) +
               pad(percent(cm->f1), 11) + std::to_string(cm->support) + "\n";
    }
    return out;
}

std::string render_report_text(const EvaluationReport& report) {
    std::string out;
    out += "Model:      " + report.model_kind + "\n";
    out += "Featurizer: " + report.featurizer_desc + "\n";
    out += "Split:      " + report.split_desc + "\n";
    out += "Evaluated:  " + std::to_string(report.evaluated) + "\n";
    out += "Weighted precision " + percent(report.metrics.precision) + ", recall " +
           percent(report.metrics.recall) + ", f1 " + percent(report.metrics.f1) + "\n\n";
    out += render_per_category_table(report);
    return out;
}

}  // namespace trxcat
