#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "trxcat/container.hpp"
#include "trxcat/error.hpp"
#include "trxcat/manifest.hpp"
#include "trxcat/pipeline.hpp"
#include "trxcat/synth.hpp"
#include "trxcat/tomlmini.hpp"

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

std::string temp_file(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("toml subset: tables, arrays of tables, types") {
    const auto doc = parse_toml(R"(
# top comment
seed = 42
rate = 0.5
name = "abc \"quoted\""
flag = true
pattern = '\b\d{6}\b'
list = [1, 2, 3]
multiline = [
  "a",  # trailing comment
  "b",
]

[table]
key = "value"

[table.nested]
x = -7

[[items]]
label = "first"

[[items]]
label = "second"
)");
    CHECK(doc.at("seed") == 42);
    CHECK(doc.at("rate") == 0.5);
    CHECK(doc.at("name") == "abc \"quoted\"");
    CHECK(doc.at("flag") == true);
    CHECK(doc.at("pattern") == "\\b\\d{6}\\b");
    CHECK(doc.at("list").size() == 3);
    CHECK(doc.at("multiline")[1] == "b");
    CHECK(doc.at("table").at("key") == "value");
    CHECK(doc.at("table").at("nested").at("x") == -7);
    CHECK(doc.at("items").size() == 2);
    CHECK(doc.at("items")[1].at("label") == "second");
}

TEST_CASE("toml subset: errors carry line numbers") {
    try {
        parse_toml("a = 1\nb = \n");
        FAIL("expected parse error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_toml("a = 1\na = 2\n"), Error);
}

TEST_CASE("container round-trips tensors and metadata byte-exactly") {
    ContainerWriter writer("test.kind");
    writer.meta()["alpha"] = 1.5;
    writer.meta()["labels"] = std::vector<std::string>{"A", "B"};
    const std::vector<double> values = {1.0, -2.5, 3.25};
    const std::vector<float> floats = {0.5f, -0.25f};
    writer.add_f64("values", {3}, values);
    writer.add_f32("floats", {1, 2}, floats);

    const auto bytes = writer.to_bytes();
    const auto bytes2 = writer.to_bytes();
    CHECK(bytes == bytes2);

    auto reader = ContainerReader::from_bytes(bytes);
    CHECK(reader.kind() == "test.kind");
    CHECK(reader.meta().at("alpha") == 1.5);
    CHECK(reader.f64("values") == values);
    CHECK(reader.f32("floats") == floats);
    CHECK(reader.tensor_shape("floats") == std::vector<std::size_t>{1, 2});
    CHECK_THROWS_AS(reader.f64("missing"), Error);
    CHECK_THROWS_AS(reader.f32("values"), Error);  // dtype mismatch
}

TEST_CASE("container rejects corrupt input") {
    CHECK_THROWS_AS(ContainerReader::from_bytes({1, 2, 3}), Error);
}

TEST_CASE("manifest hash changes iff content changes") {
    const std::string a = temp_file("trxcat_hash_a.txt");
    const std::string b = temp_file("trxcat_hash_b.txt");
    std::ofstream(a) << "content one";
    std::ofstream(b) << "content one";
    CHECK(hash_file(a) == hash_file(b));
    std::ofstream(b) << "content two";
    CHECK(hash_file(a) != hash_file(b));
    CHECK(hash_text("x") != hash_text("y"));
    CHECK(hash_text("x") == hash_text("x"));
}

TEST_CASE("pipeline artifacts reload to identical predictions") {
    Dataset corpus = labeled_corpus(800, 77);
    for (ModelKind kind : {ModelKind::naive_bayes, ModelKind::logistic_regression,
                           ModelKind::linear_svm, ModelKind::random_forest}) {
        ModelSpec spec;
        spec.kind = kind;
        spec.lr_epochs = 10;
        spec.svm_epochs = 10;
        spec.rf_trees = 5;

        FeaturizerSpec feat;
        feat.kind = FeaturizerKind::ngram_tfidf;

        PipelineModel model = train_pipeline(corpus, config_path("cleaning.default.toml"),
                                             config_path("names.sample.txt"), feat, spec);
        const std::string path = temp_file("trxcat_model_rt.bin");
        model.save(path);
        PipelineModel reloaded = PipelineModel::load(path);

        CHECK(model.to_bytes() == reloaded.to_bytes());
        CHECK(model.predict_dataset(corpus) == reloaded.predict_dataset(corpus));
        CHECK(reloaded.classifier.featurizer_ref == model.classifier.featurizer_ref);
    }
}

TEST_CASE("embedding featurizer round-trips and transforms consistently") {
    Dataset corpus = labeled_corpus(400, 83);

    FeaturizerSpec feat;
    feat.kind = FeaturizerKind::word2vec_pca;
    feat.w2v.vector_size = 16;
    feat.w2v.epochs = 5;
    feat.w2v.min_count = 1;
    feat.pad_len = 6;
    feat.pca_components = 20;

    ModelSpec spec;
    spec.kind = ModelKind::random_forest;
    spec.rf_trees = 10;

    PipelineModel model = train_pipeline(corpus, config_path("cleaning.default.toml"),
                                         config_path("names.sample.txt"), feat, spec);
    const std::string path = temp_file("trxcat_w2v_rt.bin");
    model.save(path);
    PipelineModel reloaded = PipelineModel::load(path);
    CHECK(model.predict_dataset(corpus) == reloaded.predict_dataset(corpus));

    // the projection dimension tracks the clamped component count
    const auto docs = model.preprocess(corpus);
    const FeatureMatrix features = model.featurizer.transform(docs);
    CHECK(features.cols() == model.featurizer.pca.k);
    CHECK(features.rows() == corpus.size());
}

TEST_CASE("training on an unlabeled corpus is an error") {
    Dataset corpus = labeled_corpus(50, 91);
    for (auto& record : corpus.records) record.category.clear();
    FeaturizerSpec feat;
    ModelSpec spec;
    spec.kind = ModelKind::naive_bayes;
    CHECK_THROWS_AS(train_pipeline(corpus, config_path("cleaning.default.toml"),
                                   config_path("names.sample.txt"), feat, spec),
                    Error);
}

TEST_CASE("featurizer content id changes with the fitted state") {
    Dataset a = labeled_corpus(200, 5);
    Dataset b = labeled_corpus(200, 6);
    const CleaningConfig cleaning = load_cleaning_config(config_path("cleaning.default.toml"));
    const NameDictionary names = load_name_dictionary(config_path("names.sample.txt"));
    FeaturizerSpec spec;

    const Featurizer fa = Featurizer::fit(spec, preprocess_dataset(a, cleaning, names));
    const Featurizer fa2 = Featurizer::fit(spec, preprocess_dataset(a, cleaning, names));
    const Featurizer fb = Featurizer::fit(spec, preprocess_dataset(b, cleaning, names));
    CHECK(fa.content_id() == fa2.content_id());
    CHECK(fa.content_id() != fb.content_id());
}
