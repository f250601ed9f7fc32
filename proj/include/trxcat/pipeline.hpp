#pragma once

#include <string>
#include <vector>

#include "trxcat/cleaning.hpp"
#include "trxcat/container.hpp"
#include "trxcat/models.hpp"
#include "trxcat/ngrams.hpp"
#include "trxcat/pca.hpp"
#include "trxcat/word2vec.hpp"

namespace trxcat {

enum class FeaturizerKind { ngram_tfidf, word2vec_pca };

FeaturizerKind parse_featurizer_kind(const std::string& text);
std::string featurizer_kind_to_string(FeaturizerKind kind);

struct FeaturizerSpec {
    FeaturizerKind kind = FeaturizerKind::ngram_tfidf;
    NgramConfig ngram;            // ngram-tfidf path
    Word2VecParams w2v;           // word2vec-pca path
    std::size_t pad_len = 14;
    std::size_t pca_components = 300;

    static FeaturizerSpec from_json(const nlohmann::json& doc);
    nlohmann::ordered_json to_json() const;
    std::string describe() const;
};

// Fitted featurization state for one of the two paths. The embedding path
// chains word2vec training, padded concatenation and a PCA projection; its
// component count is clamped to what the training matrix can support.
class Featurizer {
public:
    FeaturizerSpec spec;
    TfidfModel tfidf;
    EmbeddingModel embedding;
    PcaModel pca;

    static Featurizer fit(const FeaturizerSpec& spec, const std::vector<TokenSequence>& docs);
    FeatureMatrix transform(const std::vector<TokenSequence>& docs) const;

    void save_into(ContainerWriter& writer) const;
    static Featurizer load_from(const ContainerReader& reader);

    // Hash of the serialized state; models carry it as featurizer_ref.
    std::string content_id() const;
};

// A self-contained classification artifact: preprocessing assets (original
// config bytes), the fitted featurizer and the classifier.
struct PipelineModel {
    std::string cleaning_text;  // cleaning config file content
    std::string cleaning_format;  // "toml" or "json"
    std::string names_text;     // name dictionary file content
    Featurizer featurizer;
    TrainedModel classifier;

    CleaningConfig cleaning;    // compiled from cleaning_text
    NameDictionary names;       // compiled from names_text

    void compile_assets();

    std::vector<TokenSequence> preprocess(const Dataset& dataset) const;
    std::vector<std::string> predict_dataset(const Dataset& dataset) const;

    void save(const std::string& path) const;
    std::vector<std::uint8_t> to_bytes() const;
    static PipelineModel load(const std::string& path);
};

CleaningConfig compile_cleaning_text(const std::string& text, const std::string& format);
NameDictionary compile_names_text(const std::string& text);

// Fits the featurizer on the labeled records only and trains the
// classifier on them; unlabeled records are ignored. With `fine_tune` the
// classifier spec is first refined by 3-fold grid search over
// default_grid(model_spec).
PipelineModel train_pipeline(const Dataset& labeled, const std::string& cleaning_path,
                             const std::string& names_path, const FeaturizerSpec& feat_spec,
                             const ModelSpec& model_spec, bool fine_tune = false);

std::string read_file_text(const std::string& path);

}  // namespace trxcat
