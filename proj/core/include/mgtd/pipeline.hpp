#ifndef MGTD_PIPELINE_HPP
#define MGTD_PIPELINE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mgtd/corpus.hpp"
#include "mgtd/ensemble.hpp"
#include "mgtd/features.hpp"
#include "mgtd/models.hpp"
#include "mgtd/preprocess.hpp"

namespace mgtd {

// One featurization channel. Channels are fitted on the training split and
// concatenated in list order into a single sparse vector per document.
struct FeatureSpec {
  enum class Analyzer { Count, TfidfWord, TfidfWordNgram, TfidfChar, EmbedAvg };
  Analyzer analyzer = Analyzer::TfidfWord;
  int nmin = 1;
  int nmax = 1;
  std::size_t min_df = 1;
  std::string embed_path;  // EmbedAvg only

  bool operator==(const FeatureSpec&) const = default;
};

enum class BaseModelKind { NaiveBayes, Linear, Mlp, Gbdt };

struct BaseModelSpec {
  BaseModelKind kind = BaseModelKind::Linear;
  double nb_alpha = 1.0;
  LinearLoss loss = LinearLoss::Logistic;
  TrainConfig cfg = TrainConfig::linear_defaults();
};

struct EnsembleMemberSpec {
  BaseModelSpec model;
  std::vector<FeatureSpec> features;  // empty = inherit the pipeline features
};

struct EnsembleSpec {
  std::vector<EnsembleMemberSpec> members;
  VoteMode mode = VoteMode::Hard;
  std::vector<double> weights;  // empty = unit weights
};

struct PipelineConfig {
  SchemeKind scheme = SchemeKind::BinaryA;
  PreprocessVersion preprocess = PreprocessVersion::None;
  std::vector<FeatureSpec> features;
  std::variant<BaseModelSpec, EnsembleSpec> model = BaseModelSpec{};
  std::uint64_t seed = 42;
};

// JSON mirror of PipelineConfig, strict about keys and enum values.
PipelineConfig config_from_json(const std::string& json_text);
PipelineConfig load_config(const std::string& path);
std::string config_to_json(const PipelineConfig& cfg);  // canonical, key-sorted

// Named recipes. "ensemble-a-mono" takes an optional pretrained-vector file;
// without one the dense channel is dropped with a warning.
PipelineConfig preset(const std::string& name, const std::string& embeddings_path = "");
const std::vector<std::string>& preset_names();

// A fitted featurization channel (vocabulary + idf or an embedding table
// reference, depending on the analyzer).
struct FittedBlock {
  FeatureSpec spec;
  Vocabulary vocab;
  IdfWeights idf;
  std::size_t table_index = 0;
  std::size_t out_dim = 0;
};

struct FittedFeatureView {
  std::vector<FittedBlock> blocks;
  std::size_t dim = 0;
};

struct FittedPipeline {
  static constexpr std::uint32_t kFormatVersion = 1;

  PipelineConfig config;
  LabelScheme scheme;
  std::vector<EmbeddingTable> tables;          // shared across views
  std::vector<FittedFeatureView> views;        // unique feature stacks
  std::vector<std::size_t> member_views;       // per ensemble member; {0} for single models
  std::variant<AnyModel, VotingEnsemble> model;
};

// Fits features on the training split only, then the model(s) on the
// transformed split. Deterministic given (config, train).
FittedPipeline pipeline_fit(const PipelineConfig& cfg, const Dataset& train);

std::vector<int> pipeline_predict(const FittedPipeline& fp, std::span<const std::string> texts);

// Probabilities where the model has them (soft ensembles, logistic/NB/MLP/
// GBDT single models); throws otherwise.
std::vector<std::vector<double>> pipeline_predict_proba(const FittedPipeline& fp,
                                                        std::span<const std::string> texts);

// Featurizes one already-preprocessed text under the given view.
SparseVector pipeline_transform(const FittedPipeline& fp, const std::string& preprocessed,
                                std::size_t view_index);

const std::vector<std::string>& pipeline_class_names(const FittedPipeline& fp);

// Self-contained binary container: magic "MGTD", format version, payload.
void save_pipeline(const FittedPipeline& fp, const std::string& path);
FittedPipeline load_pipeline(const std::string& path);
std::vector<std::uint8_t> pipeline_to_bytes(const FittedPipeline& fp);

}  // namespace mgtd

#endif  // MGTD_PIPELINE_HPP
