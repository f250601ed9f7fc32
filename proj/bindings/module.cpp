#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "trxcat/dataset_io.hpp"
#include "trxcat/error.hpp"
#include "trxcat/experiment.hpp"
#include "trxcat/metrics.hpp"
#include "trxcat/pca.hpp"
#include "trxcat/pipeline.hpp"
#include "trxcat/rules.hpp"
#include "trxcat/similarity.hpp"
#include "trxcat/split.hpp"
#include "trxcat/synth.hpp"
#include "trxcat/tfidf.hpp"
#include "trxcat/word2vec.hpp"

namespace py = pybind11;
using namespace trxcat;

namespace {

std::vector<TokenSequence> to_docs(const std::vector<std::vector<std::string>>& raw) {
    std::vector<TokenSequence> docs;
    docs.reserve(raw.size());
    for (const auto& tokens : raw) {
        TokenSequence seq;
        seq.tokens = tokens;
        docs.push_back(std::move(seq));
    }
    return docs;
}

py::dict transaction_to_dict(const Transaction& t) {
    py::dict d;
    d["id"] = t.id;
    d["description"] = t.description;
    d["value"] = format_cents(t.value_cents);
    d["date"] = format_iso(t.date);
    if (t.category.empty()) {
        d["category"] = py::none();
    } else {
        d["category"] = t.category;
    }
    return d;
}

Transaction transaction_from_dict(const py::dict& d) {
    Transaction t;
    t.id = py::cast<std::string>(d["id"]);
    t.description = py::cast<std::string>(d["description"]);
    t.value_cents = parse_cents(py::cast<std::string>(py::str(d["value"])));
    t.date = parse_iso_date(py::cast<std::string>(d["date"]));
    if (d.contains("category") && !d["category"].is_none()) {
        t.category = py::cast<std::string>(d["category"]);
    }
    return t;
}

Dataset dataset_from_records(const py::list& records) {
    Dataset dataset;
    for (const auto& item : records) {
        Transaction t = transaction_from_dict(py::cast<py::dict>(item));
        if (!t.category.empty() && !dataset.has_label(t.category)) {
            dataset.taxonomy.push_back(t.category);
        }
        dataset.records.push_back(std::move(t));
    }
    validate_dataset(dataset);
    return dataset;
}

py::list dataset_to_records(const Dataset& dataset) {
    py::list out;
    for (const auto& t : dataset.records) out.append(transaction_to_dict(t));
    return out;
}

FeatureMatrix dense_features(const py::array_t<float, py::array::c_style | py::array::forcecast>& x) {
    if (x.ndim() != 2) throw_validation("feature array must be 2-dimensional");
    DenseMatrix m(static_cast<std::size_t>(x.shape(0)), static_cast<std::size_t>(x.shape(1)));
    std::copy(x.data(), x.data() + x.size(), m.data.begin());
    return FeatureMatrix(std::move(m));
}

py::array_t<double> scores_array(std::vector<double> scores, std::size_t rows, std::size_t k) {
    py::array_t<double> out({rows, k});
    std::copy(scores.begin(), scores.end(), out.mutable_data());
    return out;
}

py::dict metrics_to_dict(const WeightedMetrics& m) {
    py::dict out;
    out["precision"] = m.precision;
    out["recall"] = m.recall;
    out["f1"] = m.f1;
    out["zero_division"] = m.zero_division;
    py::list per_class;
    for (const auto& cm : m.per_class) {
        py::dict c;
        c["category"] = cm.label;
        c["precision"] = cm.precision;
        c["recall"] = cm.recall;
        c["f1"] = cm.f1;
        c["support"] = cm.support;
        per_class.append(c);
    }
    out["per_category"] = per_class;
    return out;
}

class PyTfidf {
public:
    PyTfidf(const std::vector<std::vector<std::string>>& docs, std::size_t min_df,
            std::size_t max_n) {
        ngram_.max_n = max_n;
        ngram_.min_df = min_df;
        model_ = fit_ngram_tfidf(to_docs(docs), ngram_);
    }

    py::tuple transform(const std::vector<std::vector<std::string>>& docs) const {
        SparseMatrix m = ngram_transform(model_, to_docs(docs), ngram_);
        py::array_t<std::int64_t> indptr(m.row_offsets.size());
        std::copy(m.row_offsets.begin(), m.row_offsets.end(), indptr.mutable_data());
        py::array_t<std::int64_t> indices(m.col_indices.size());
        std::copy(m.col_indices.begin(), m.col_indices.end(), indices.mutable_data());
        py::array_t<double> data(m.values.size());
        std::copy(m.values.begin(), m.values.end(), data.mutable_data());
        return py::make_tuple(indptr, indices, data, py::make_tuple(m.rows, m.cols));
    }

    std::vector<std::string> terms() const { return model_.terms; }
    std::vector<double> idf() const { return model_.idf; }

private:
    NgramConfig ngram_;
    TfidfModel model_;
};

class PyClassifier {
public:
    PyClassifier(TrainedModel model) : model_(std::move(model)) {}

    static PyClassifier train_dense(
        const std::string& kind,
        const py::array_t<float, py::array::c_style | py::array::forcecast>& x,
        const std::vector<std::string>& y, const py::dict& params) {
        return PyClassifier(train(dense_features(x), y, spec_from(kind, params)));
    }

    std::vector<std::string> predict_dense(
        const py::array_t<float, py::array::c_style | py::array::forcecast>& x) const {
        return predict(model_, dense_features(x));
    }

    py::array_t<double> scores_dense(
        const py::array_t<float, py::array::c_style | py::array::forcecast>& x) const {
        const FeatureMatrix features = dense_features(x);
        return scores_array(predict_scores(model_, features), features.rows(), model_.k());
    }

    std::vector<std::string> labels() const { return model_.labels; }

private:
    static ModelSpec spec_from(const std::string& kind, const py::dict& params) {
        ModelSpec spec;
        spec.kind = parse_model_kind(kind);
        for (const auto& item : params) {
            const std::string key = py::cast<std::string>(item.first);
            if (key == "seed") spec.seed = py::cast<std::uint64_t>(item.second);
            else if (key == "alpha") spec.nb_alpha = py::cast<double>(item.second);
            else if (key == "lambda_") spec.lr_lambda = py::cast<double>(item.second);
            else if (key == "c") spec.svm_c = py::cast<double>(item.second);
            else if (key == "epochs") {
                spec.lr_epochs = spec.svm_epochs = py::cast<std::size_t>(item.second);
            } else if (key == "batch") {
                spec.lr_batch = spec.svm_batch = py::cast<std::size_t>(item.second);
            } else if (key == "learning_rate") {
                spec.lr_learning_rate = spec.svm_learning_rate = py::cast<double>(item.second);
            } else if (key == "trees") spec.rf_trees = py::cast<std::size_t>(item.second);
            else if (key == "max_depth") spec.rf_max_depth = py::cast<std::size_t>(item.second);
            else if (key == "min_leaf") spec.rf_min_leaf = py::cast<std::size_t>(item.second);
            else if (key == "class_weight_balanced") {
                spec.class_weight_balanced = py::cast<bool>(item.second);
            } else {
                throw_config("unknown hyperparameter '" + key + "'");
            }
        }
        return spec;
    }

    TrainedModel model_;
};

class PyWord2Vec {
public:
    PyWord2Vec(const std::vector<std::vector<std::string>>& docs, const py::dict& params) {
        Word2VecParams p;
        for (const auto& item : params) {
            const std::string key = py::cast<std::string>(item.first);
            if (key == "vector_size") p.vector_size = py::cast<std::size_t>(item.second);
            else if (key == "window") p.window = py::cast<std::size_t>(item.second);
            else if (key == "epochs") p.epochs = py::cast<std::size_t>(item.second);
            else if (key == "negative") p.negative = py::cast<std::size_t>(item.second);
            else if (key == "min_count") p.min_count = py::cast<std::size_t>(item.second);
            else if (key == "initial_lr") p.initial_lr = py::cast<double>(item.second);
            else if (key == "seed") p.seed = py::cast<std::uint64_t>(item.second);
            else if (key == "workers") p.workers = py::cast<std::size_t>(item.second);
            else throw_config("unknown word2vec parameter '" + key + "'");
        }
        model_ = train_word2vec(to_docs(docs), p);
    }

    std::vector<std::string> vocabulary() const { return model_.words; }

    py::array_t<float> vectors() const {
        py::array_t<float> out({model_.vocab_size(), model_.vector_size});
        std::copy(model_.vectors.begin(), model_.vectors.end(), out.mutable_data());
        return out;
    }

    double cosine(const std::string& a, const std::string& b) const {
        return cosine_between(model_, a, b);
    }

    py::array_t<float> embed(const std::vector<std::string>& tokens, std::size_t pad_len) const {
        TokenSequence seq;
        seq.tokens = tokens;
        const auto vec = embed_sequence(seq, model_, pad_len);
        py::array_t<float> out(vec.size());
        std::copy(vec.begin(), vec.end(), out.mutable_data());
        return out;
    }

    std::vector<double> epoch_loss() const { return model_.epoch_loss; }

private:
    EmbeddingModel model_;
};

class PyPca {
public:
    PyPca(const py::array_t<float, py::array::c_style | py::array::forcecast>& x, std::size_t k) {
        if (x.ndim() != 2) throw_validation("pca input must be 2-dimensional");
        DenseMatrix m(static_cast<std::size_t>(x.shape(0)), static_cast<std::size_t>(x.shape(1)));
        std::copy(x.data(), x.data() + x.size(), m.data.begin());
        model_ = fit_pca(m, k);
    }

    py::array_t<float> transform(
        const py::array_t<float, py::array::c_style | py::array::forcecast>& x) const {
        DenseMatrix m(static_cast<std::size_t>(x.shape(0)), static_cast<std::size_t>(x.shape(1)));
        std::copy(x.data(), x.data() + x.size(), m.data.begin());
        DenseMatrix out = pca_transform(model_, m);
        py::array_t<float> result({out.rows, out.cols});
        std::copy(out.data.begin(), out.data.end(), result.mutable_data());
        return result;
    }

    std::vector<double> explained_variance_ratio() const {
        return model_.explained_variance_ratio;
    }
    double retained_variance() const { return model_.retained_variance(); }
    bool rank_deficient() const { return model_.rank_deficient; }

private:
    PcaModel model_;
};

class PyCleaner {
public:
    PyCleaner(const std::string& cleaning_path, const std::string& names_path)
        : config_(load_cleaning_config(cleaning_path)),
          names_(load_name_dictionary(names_path)) {}

    std::vector<std::string> clean_one(const std::string& description) const {
        return anonymize_names(clean(description, config_), names_).tokens;
    }

    std::vector<std::vector<std::string>> preprocess(
        const std::vector<std::string>& descriptions) const {
        std::vector<std::vector<std::string>> out;
        out.reserve(descriptions.size());
        for (const auto& d : descriptions) out.push_back(clean_one(d));
        return out;
    }

private:
    CleaningConfig config_;
    NameDictionary names_;
};

class PyRules {
public:
    explicit PyRules(const std::string& path) : rules_(load_ruleset(path)) {}

    py::object apply(const std::string& description, const std::string& value) const {
        Transaction t;
        t.description = description;
        t.value_cents = parse_cents(value);
        auto label = apply_rules(t, rules_);
        if (!label.has_value()) return py::none();
        return py::cast(*label);
    }

private:
    RuleSet rules_;
};

class PyPipelineModel {
public:
    static PyPipelineModel load(const std::string& path) {
        PyPipelineModel m;
        m.model_ = PipelineModel::load(path);
        return m;
    }

    std::vector<std::string> predict_records(const py::list& records) const {
        return model_.predict_dataset(dataset_from_records(records));
    }

    std::string model_kind() const { return model_kind_to_string(model_.classifier.spec.kind); }
    std::string featurizer_ref() const { return model_.classifier.featurizer_ref; }

private:
    PipelineModel model_;
};

}  // namespace

PYBIND11_MODULE(_trxcat, m) {
    m.doc() = "Transaction classification pipeline (native core)";

    py::register_exception<Error>(m, "TrxcatError");

    m.def(
        "generate_synthetic",
        [](const std::string& config_path, py::object n_records, py::object seed) {
            SynthConfig config = load_synth_config(config_path);
            if (!n_records.is_none()) config.n_records = py::cast<std::size_t>(n_records);
            if (!seed.is_none()) config.seed = py::cast<std::uint64_t>(seed);
            return dataset_to_records(generate_synthetic(config));
        },
        py::arg("config_path"), py::arg("n_records") = py::none(), py::arg("seed") = py::none());

    m.def("read_dataset", [](const std::string& path) { return dataset_to_records(read_dataset(path)); });

    m.def(
        "write_dataset",
        [](const py::list& records, const std::string& path) {
            write_dataset_jsonl(dataset_from_records(records), path);
        },
        py::arg("records"), py::arg("path"));

    m.def(
        "split_dataset",
        [](const py::list& records, double fraction, std::uint64_t seed) {
            auto [train_set, test_set] = split(dataset_from_records(records), fraction, seed);
            return py::make_tuple(dataset_to_records(train_set), dataset_to_records(test_set));
        },
        py::arg("records"), py::arg("train_fraction"), py::arg("seed"));

    m.def(
        "similar_pairs",
        [](const std::vector<std::vector<std::string>>& docs, double threshold) {
            const auto seqs = to_docs(docs);
            const TfidfModel model = fit_tfidf(seqs, 1);
            const SparseMatrix matrix = tfidf_transform(model, seqs);
            py::list out;
            for (const auto& pair : similar_pairs(matrix, threshold)) {
                out.append(py::make_tuple(pair.first, pair.second, pair.cosine));
            }
            return out;
        },
        py::arg("docs"), py::arg("threshold"));

    m.def(
        "dedup_indices",
        [](const std::vector<std::vector<std::string>>& docs, double threshold) {
            const auto seqs = to_docs(docs);
            bool any = false;
            for (const auto& d : seqs) any = any || !d.tokens.empty();
            DedupOutcome outcome;
            if (any) {
                const TfidfModel model = fit_tfidf(seqs, 1);
                outcome = dedup_rows(tfidf_transform(model, seqs), threshold);
            } else {
                for (std::size_t i = 0; i < seqs.size(); ++i) {
                    outcome.kept.push_back(static_cast<std::uint32_t>(i));
                }
            }
            py::list drops;
            for (const auto& [dropped, kept, cosine] : outcome.dropped) {
                drops.append(py::make_tuple(dropped, kept, cosine));
            }
            return py::make_tuple(outcome.kept, drops);
        },
        py::arg("docs"), py::arg("threshold"));

    m.def(
        "weighted_metrics",
        [](const std::vector<std::string>& y_true, const std::vector<std::string>& y_pred) {
            return metrics_to_dict(weighted_metrics(confusion(y_true, y_pred)));
        },
        py::arg("y_true"), py::arg("y_pred"));

    py::class_<PyCleaner>(m, "CleaningPipeline")
        .def(py::init<const std::string&, const std::string&>(), py::arg("cleaning_path"),
             py::arg("names_path"))
        .def("clean", &PyCleaner::clean_one, py::arg("description"))
        .def("preprocess", &PyCleaner::preprocess, py::arg("descriptions"));

    py::class_<PyRules>(m, "RuleEngine")
        .def(py::init<const std::string&>(), py::arg("rules_path"))
        .def("apply", &PyRules::apply, py::arg("description"), py::arg("value"));

    py::class_<PyTfidf>(m, "NgramTfidf")
        .def(py::init<const std::vector<std::vector<std::string>>&, std::size_t, std::size_t>(),
             py::arg("docs"), py::arg("min_df") = 1, py::arg("max_n") = 1)
        .def("transform", &PyTfidf::transform, py::arg("docs"))
        .def_property_readonly("terms", &PyTfidf::terms)
        .def_property_readonly("idf", &PyTfidf::idf);

    py::class_<PyClassifier>(m, "Classifier")
        .def_static("train", &PyClassifier::train_dense, py::arg("kind"), py::arg("x"),
                    py::arg("y"), py::arg("params") = py::dict())
        .def("predict", &PyClassifier::predict_dense, py::arg("x"))
        .def("predict_scores", &PyClassifier::scores_dense, py::arg("x"))
        .def_property_readonly("labels", &PyClassifier::labels);

    py::class_<PyWord2Vec>(m, "Word2Vec")
        .def(py::init<const std::vector<std::vector<std::string>>&, const py::dict&>(),
             py::arg("docs"), py::arg("params") = py::dict())
        .def_property_readonly("vocabulary", &PyWord2Vec::vocabulary)
        .def_property_readonly("vectors", &PyWord2Vec::vectors)
        .def_property_readonly("epoch_loss", &PyWord2Vec::epoch_loss)
        .def("cosine", &PyWord2Vec::cosine, py::arg("a"), py::arg("b"))
        .def("embed", &PyWord2Vec::embed, py::arg("tokens"), py::arg("pad_len") = 14);

    py::class_<PyPca>(m, "Pca")
        .def(py::init<const py::array_t<float, py::array::c_style | py::array::forcecast>&,
                      std::size_t>(),
             py::arg("x"), py::arg("k"))
        .def("transform", &PyPca::transform, py::arg("x"))
        .def_property_readonly("explained_variance_ratio", &PyPca::explained_variance_ratio)
        .def_property_readonly("retained_variance", &PyPca::retained_variance)
        .def_property_readonly("rank_deficient", &PyPca::rank_deficient);

    py::class_<PyPipelineModel>(m, "PipelineModel")
        .def_static("load", &PyPipelineModel::load, py::arg("path"))
        .def("predict_records", &PyPipelineModel::predict_records, py::arg("records"))
        .def_property_readonly("model_kind", &PyPipelineModel::model_kind)
        .def_property_readonly("featurizer_ref", &PyPipelineModel::featurizer_ref);

    m.attr("__version__") = "0.1.0";
}
