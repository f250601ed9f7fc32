#include "trxcat/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "trxcat/error.hpp"
#include "trxcat/manifest.hpp"
#include "trxcat/text.hpp"
#include "trxcat/tomlmini.hpp"

namespace trxcat {

FeaturizerKind parse_featurizer_kind(const std::string& text) {
    if (text == "ngram_tfidf" || text == "ngram-tfidf") return FeaturizerKind::ngram_tfidf;
    if (text == "word2vec_pca" || text == "word2vec-pca") return FeaturizerKind::word2vec_pca;
    throw_config("unknown featurizer kind '" + text + "'");
}

std::string featurizer_kind_to_string(FeaturizerKind kind) {
    return kind == FeaturizerKind::ngram_tfidf ? "ngram_tfidf" : "word2vec_pca";
}

FeaturizerSpec FeaturizerSpec::from_json(const nlohmann::json& doc) {
    FeaturizerSpec spec;
    try {
        spec.kind = parse_featurizer_kind(doc.value("kind", std::string("ngram_tfidf")));
        spec.ngram.max_n = doc.value("max_n", spec.ngram.max_n);
        spec.ngram.min_df = doc.value("min_df", spec.ngram.min_df);
        spec.w2v.vector_size = doc.value("vector_size", spec.w2v.vector_size);
        spec.w2v.window = doc.value("window", spec.w2v.window);
        spec.w2v.epochs = doc.value("epochs", spec.w2v.epochs);
        spec.w2v.negative = doc.value("negative", spec.w2v.negative);
        spec.w2v.min_count = doc.value("min_count", spec.w2v.min_count);
        spec.w2v.initial_lr = doc.value("initial_lr", spec.w2v.initial_lr);
        spec.w2v.seed = doc.value("seed", spec.w2v.seed);
        spec.w2v.workers = doc.value("workers", spec.w2v.workers);
        spec.pad_len = doc.value("pad_len", spec.pad_len);
        spec.pca_components = doc.value("pca_components", spec.pca_components);
    } catch (const nlohmann::json::exception& e) {
        throw_config(std::string("bad featurizer spec: ") + e.what());
    }
    spec.ngram.validate();
    spec.w2v.validate();
    if (spec.pad_len == 0) throw_config("pad_len must be positive");
    if (spec.pca_components == 0) throw_config("pca_components must be positive");
    return spec;
}

nlohmann::ordered_json FeaturizerSpec::to_json() const {
    nlohmann::ordered_json doc;
    doc["kind"] = featurizer_kind_to_string(kind);
    if (kind == FeaturizerKind::ngram_tfidf) {
        doc["max_n"] = ngram.max_n;
        doc["min_df"] = ngram.min_df;
    } else {
        doc["vector_size"] = w2v.vector_size;
        doc["window"] = w2v.window;
        doc["epochs"] = w2v.epochs;
        doc["negative"] = w2v.negative;
        doc["min_count"] = w2v.min_count;
        doc["initial_lr"] = w2v.initial_lr;
        doc["seed"] = w2v.seed;
        doc["workers"] = w2v.workers;
        doc["pad_len"] = pad_len;
        doc["pca_components"] = pca_components;
    }
    return doc;
}

std::string FeaturizerSpec::describe() const {
    if (kind == FeaturizerKind::ngram_tfidf) {
        return "ngram_tfidf(n=1.." + std::to_string(ngram.max_n) +
               ",min_df=" + std::to_string(ngram.min_df) + ")";
    }
    return "word2vec_pca(d=" + std::to_string(w2v.vector_size) +
           ",pad=" + std::to_string(pad_len) + ",k=" + std::to_string(pca_components) + ")";
}

Featurizer Featurizer::fit(const FeaturizerSpec& spec, const std::vector<TokenSequence>& docs) {
    Featurizer f;
    f.spec = spec;
    if (spec.kind == FeaturizerKind::ngram_tfidf) {
        f.tfidf = fit_ngram_tfidf(docs, spec.ngram);
        return f;
    }
    f.embedding = train_word2vec(docs, spec.w2v);
    DenseMatrix embedded(docs.size(), spec.pad_len * spec.w2v.vector_size);
    for (std::size_t i = 0; i < docs.size(); ++i) {
        const auto row = embed_sequence(docs[i], f.embedding, spec.pad_len);
        std::copy(row.begin(), row.end(), embedded.row(i));
    }
    const std::size_t k =
        std::min({spec.pca_components, embedded.rows - 1, embedded.cols});
    if (k == 0) throw_validation("featurizer: too few documents for the pca projection");
    f.pca = fit_pca(embedded, k);
    return f;
}

FeatureMatrix Featurizer::transform(const std::vector<TokenSequence>& docs) const {
    if (spec.kind == FeaturizerKind::ngram_tfidf) {
        return FeatureMatrix(ngram_transform(tfidf, docs, spec.ngram));
    }
    DenseMatrix embedded(docs.size(), spec.pad_len * spec.w2v.vector_size);
    for (std::size_t i = 0; i < docs.size(); ++i) {
        const auto row = embed_sequence(docs[i], embedding, spec.pad_len);
        std::copy(row.begin(), row.end(), embedded.row(i));
    }
    return FeatureMatrix(pca_transform(pca, embedded));
}

void Featurizer::save_into(ContainerWriter& writer) const {
    auto& meta = writer.meta();
    meta["featurizer"] = spec.to_json();
    if (spec.kind == FeaturizerKind::ngram_tfidf) {
        meta["featurizer"]["terms"] = tfidf.terms;
        meta["featurizer"]["document_count"] = tfidf.document_count;
        writer.add_f64("featurizer.idf", {tfidf.idf.size()}, tfidf.idf);
        return;
    }
    meta["featurizer"]["words"] = embedding.words;
    writer.add_f32("featurizer.vectors", {embedding.vocab_size(), embedding.vector_size},
                   embedding.vectors);
    writer.add_f64("featurizer.epoch_loss", {embedding.epoch_loss.size()}, embedding.epoch_loss);
    writer.add_f32("featurizer.pca_mean", {pca.mean.size()}, pca.mean);
    writer.add_f32("featurizer.pca_components", {pca.k, pca.input_dim}, pca.components);
    writer.add_f64("featurizer.pca_variance", {pca.explained_variance.size()},
                   pca.explained_variance);
    writer.add_f64("featurizer.pca_variance_ratio", {pca.explained_variance_ratio.size()},
                   pca.explained_variance_ratio);
    meta["featurizer"]["pca_total_variance"] = pca.total_variance;
    meta["featurizer"]["pca_rank_deficient"] = pca.rank_deficient;
}

Featurizer Featurizer::load_from(const ContainerReader& reader) {
    Featurizer f;
    const auto& meta = reader.meta().at("featurizer");
    f.spec = FeaturizerSpec::from_json(meta);
    if (f.spec.kind == FeaturizerKind::ngram_tfidf) {
        f.tfidf.terms = meta.at("terms").get<std::vector<std::string>>();
        f.tfidf.document_count = meta.at("document_count").get<std::size_t>();
        f.tfidf.idf = reader.f64("featurizer.idf");
        for (std::size_t i = 0; i < f.tfidf.terms.size(); ++i) {
            f.tfidf.vocabulary.emplace(f.tfidf.terms[i], static_cast<std::uint32_t>(i));
        }
        return f;
    }
    f.embedding.vector_size = f.spec.w2v.vector_size;
    f.embedding.params = f.spec.w2v;
    f.embedding.words = meta.at("words").get<std::vector<std::string>>();
    for (std::size_t i = 0; i < f.embedding.words.size(); ++i) {
        f.embedding.vocabulary.emplace(f.embedding.words[i], static_cast<std::uint32_t>(i));
    }
    f.embedding.vectors = reader.f32("featurizer.vectors");
    f.embedding.epoch_loss = reader.f64("featurizer.epoch_loss");
    f.pca.mean = reader.f32("featurizer.pca_mean");
    f.pca.components = reader.f32("featurizer.pca_components");
    const auto shape = reader.tensor_shape("featurizer.pca_components");
    f.pca.k = shape.at(0);
    f.pca.input_dim = shape.at(1);
    f.pca.explained_variance = reader.f64("featurizer.pca_variance");
    f.pca.explained_variance_ratio = reader.f64("featurizer.pca_variance_ratio");
    f.pca.total_variance = meta.at("pca_total_variance").get<double>();
    f.pca.rank_deficient = meta.at("pca_rank_deficient").get<bool>();
    return f;
}

std::string Featurizer::content_id() const {
    ContainerWriter writer("featurizer");
    save_into(writer);
    const auto bytes = writer.to_bytes();
    return hash_text(std::string(bytes.begin(), bytes.end()));
}

namespace {

nlohmann::ordered_json model_spec_to_json(const ModelSpec& spec) {
    nlohmann::ordered_json doc;
    doc["kind"] = model_kind_to_string(spec.kind);
    doc["seed"] = spec.seed;
    switch (spec.kind) {
        case ModelKind::naive_bayes:
            doc["alpha"] = spec.nb_alpha;
            break;
        case ModelKind::logistic_regression:
            doc["lambda"] = spec.lr_lambda;
            doc["epochs"] = spec.lr_epochs;
            doc["batch"] = spec.lr_batch;
            doc["learning_rate"] = spec.lr_learning_rate;
            break;
        case ModelKind::linear_svm:
            doc["c"] = spec.svm_c;
            doc["epochs"] = spec.svm_epochs;
            doc["batch"] = spec.svm_batch;
            doc["learning_rate"] = spec.svm_learning_rate;
            break;
        case ModelKind::random_forest:
            doc["trees"] = spec.rf_trees;
            doc["max_depth"] = spec.rf_max_depth;
            doc["min_leaf"] = spec.rf_min_leaf;
            break;
    }
    return doc;
}

ModelSpec model_spec_from_json(const nlohmann::json& doc) {
    ModelSpec spec;
    spec.kind = parse_model_kind(doc.value("kind", std::string("naive_bayes")));
    spec.seed = doc.value("seed", spec.seed);
    spec.nb_alpha = doc.value("alpha", spec.nb_alpha);
    spec.lr_lambda = doc.value("lambda", spec.lr_lambda);
    spec.svm_c = doc.value("c", spec.svm_c);
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

}  // namespace

void PipelineModel::compile_assets() {
    cleaning = compile_cleaning_text(cleaning_text, cleaning_format);
    names = compile_names_text(names_text);
}

CleaningConfig compile_cleaning_text(const std::string& text, const std::string& format) {
    nlohmann::json doc;
    if (format == "toml") {
        doc = parse_toml(text);
    } else {
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw_config(std::string("embedded cleaning config is not valid JSON: ") + e.what());
        }
    }
    return cleaning_config_from_json(doc);
}

NameDictionary compile_names_text(const std::string& text) {
    NameDictionary dict;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::string name = trim(line);
        if (name.empty() || name[0] == '#') continue;
        dict.names.insert(fold_to_ascii(name));
    }
    if (dict.names.empty()) throw_config("embedded name dictionary is empty");
    return dict;
}

std::vector<TokenSequence> PipelineModel::preprocess(const Dataset& dataset) const {
    return preprocess_dataset(dataset, cleaning, names);
}

std::vector<std::string> PipelineModel::predict_dataset(const Dataset& dataset) const {
    if (dataset.records.empty()) return {};
    return predict(classifier, featurizer.transform(preprocess(dataset)));
}

std::vector<std::uint8_t> PipelineModel::to_bytes() const {
    ContainerWriter writer("trxcat.model");
    auto& meta = writer.meta();
    meta["model"] = model_spec_to_json(classifier.spec);
    meta["labels"] = classifier.labels;
    meta["feature_dim"] = classifier.feature_dim;
    meta["featurizer_ref"] = classifier.featurizer_ref;
    meta["cleaning_format"] = cleaning_format;
    meta["cleaning_text"] = cleaning_text;
    meta["names_text"] = names_text;

    switch (classifier.spec.kind) {
        case ModelKind::naive_bayes:
            writer.add_f64("nb.log_prior", {classifier.k()}, classifier.nb_log_prior);
            writer.add_f64("nb.log_likelihood", {classifier.k(), classifier.feature_dim},
                           classifier.nb_log_likelihood);
            break;
        case ModelKind::logistic_regression:
        case ModelKind::linear_svm:
            writer.add_f64("linear.weights", {classifier.k(), classifier.feature_dim},
                           classifier.weights);
            writer.add_f64("linear.bias", {classifier.k()}, classifier.bias);
            break;
        case ModelKind::random_forest: {
            std::vector<std::int32_t> structure;  // feature,left,right,label per node
            std::vector<double> thresholds;
            std::vector<std::int32_t> offsets{0};
            for (const Tree& tree : classifier.trees) {
                for (const TreeNode& node : tree.nodes) {
                    structure.push_back(node.feature);
                    structure.push_back(node.left);
                    structure.push_back(node.right);
                    structure.push_back(node.label);
                    thresholds.push_back(node.threshold);
                }
                offsets.push_back(static_cast<std::int32_t>(thresholds.size()));
            }
            writer.add_i32("forest.structure", {thresholds.size(), 4}, structure);
            writer.add_f64("forest.thresholds", {thresholds.size()}, thresholds);
            writer.add_i32("forest.offsets", {offsets.size()}, offsets);
            break;
        }
    }
    if (!classifier.objective_curve.empty()) {
        writer.add_f64("objective_curve", {classifier.objective_curve.size()},
                       classifier.objective_curve);
    }
    featurizer.save_into(writer);
    return writer.to_bytes();
}

void PipelineModel::save(const std::string& path) const {
    const auto bytes = to_bytes();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw_io("cannot write model '" + path + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw_io("write failed for '" + path + "'");
}

PipelineModel PipelineModel::load(const std::string& path) {
    ContainerReader reader = ContainerReader::from_file(path);
    if (reader.kind() != "trxcat.model") {
        throw_schema("'" + path + "' is not a model artifact (kind '" + reader.kind() + "')");
    }
    PipelineModel pm;
    const auto& meta = reader.meta();
    pm.classifier.spec = model_spec_from_json(meta.at("model"));
    pm.classifier.labels = meta.at("labels").get<std::vector<std::string>>();
    pm.classifier.feature_dim = meta.at("feature_dim").get<std::size_t>();
    pm.classifier.featurizer_ref = meta.value("featurizer_ref", std::string());
    pm.cleaning_format = meta.at("cleaning_format").get<std::string>();
    pm.cleaning_text = meta.at("cleaning_text").get<std::string>();
    pm.names_text = meta.at("names_text").get<std::string>();

    switch (pm.classifier.spec.kind) {
        case ModelKind::naive_bayes:
            pm.classifier.nb_log_prior = reader.f64("nb.log_prior");
            pm.classifier.nb_log_likelihood = reader.f64("nb.log_likelihood");
            break;
        case ModelKind::logistic_regression:
        case ModelKind::linear_svm:
            pm.classifier.weights = reader.f64("linear.weights");
            pm.classifier.bias = reader.f64("linear.bias");
            break;
        case ModelKind::random_forest: {
            const auto structure = reader.i32("forest.structure");
            const auto thresholds = reader.f64("forest.thresholds");
            const auto offsets = reader.i32("forest.offsets");
            for (std::size_t t = 0; t + 1 < offsets.size(); ++t) {
                Tree tree;
                for (std::int32_t n = offsets[t]; n < offsets[t + 1]; ++n) {
                    TreeNode node;
                    node.feature = structure[static_cast<std::size_t>(n) * 4];
                    node.left = structure[static_cast<std::size_t>(n) * 4 + 1];
                    node.right = structure[static_cast<std::size_t>(n) * 4 + 2];
                    node.label = structure[static_cast<std::size_t>(n) * 4 + 3];
                    node.threshold = thresholds[static_cast<std::size_t>(n)];
                    tree.nodes.push_back(node);
                }
                pm.classifier.trees.push_back(std::move(tree));
            }
            break;
        }
    }
    if (reader.has_tensor("objective_curve")) {
        pm.classifier.objective_curve = reader.f64("objective_curve");
    }
    pm.featurizer = Featurizer::load_from(reader);
    pm.compile_assets();
    return pm;
}

std::string read_file_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_io("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

PipelineModel train_pipeline(const Dataset& labeled, const std::string& cleaning_path,
                             const std::string& names_path, const FeaturizerSpec& feat_spec,
                             const ModelSpec& model_spec, bool fine_tune) {
    PipelineModel pm;
    pm.cleaning_text = read_file_text(cleaning_path);
    pm.cleaning_format = cleaning_path.ends_with(".toml") ? "toml" : "json";
    pm.names_text = read_file_text(names_path);
    pm.compile_assets();

    Dataset train_set;
    train_set.taxonomy = labeled.taxonomy;
    for (const auto& record : labeled.records) {
        if (record.labeled()) train_set.records.push_back(record);
    }
    if (train_set.records.empty()) {
        throw_validation("training corpus has no labeled records");
    }

    const auto docs = pm.preprocess(train_set);
    pm.featurizer = Featurizer::fit(feat_spec, docs);

    std::vector<std::string> y;
    y.reserve(train_set.records.size());
    for (const auto& record : train_set.records) y.push_back(record.category);

    const FeatureMatrix features = pm.featurizer.transform(docs);
    ModelSpec spec = model_spec;
    if (fine_tune) {
        auto [best, cv_report] = grid_search(features, y, default_grid(spec), 3, spec.seed);
        spec = best;
    }
    pm.classifier = train(features, y, spec);
    pm.classifier.featurizer_ref = pm.featurizer.content_id();
    return pm;
}

}  // namespace trxcat
