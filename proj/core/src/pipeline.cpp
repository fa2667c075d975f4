#include "mgtd/pipeline.hpp"

#include <algorithm>
#include <iostream>
#include <fstream>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "mgtd/parallel.hpp"
#include "mgtd/serialize.hpp"

namespace mgtd {

using nlohmann::json;

namespace {

// --- config JSON ---

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& context) {
  for (const auto& item : obj.items()) {
    const std::string& key = item.key();
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&key](const char* a) { return key == a; }) == allowed.end())
      throw std::runtime_error("config: unknown key \"" + key + "\" in " + context);
  }
}

FeatureSpec feature_spec_from_json(const json& obj) {
  if (!obj.is_object()) throw std::runtime_error("config: feature spec must be an object");
  const std::string analyzer = obj.value("analyzer", "");
  FeatureSpec spec;
  if (analyzer == "count" || analyzer == "tfidf_word") {
    check_keys(obj, {"analyzer", "min_df"}, "feature spec '" + analyzer + "'");
    spec.analyzer = analyzer == "count" ? FeatureSpec::Analyzer::Count
                                        : FeatureSpec::Analyzer::TfidfWord;
  } else if (analyzer == "tfidf_wordngram" || analyzer == "tfidf_char") {
    check_keys(obj, {"analyzer", "nmin", "nmax", "min_df"}, "feature spec '" + analyzer + "'");
    if (!obj.contains("nmin") || !obj.contains("nmax"))
      throw std::runtime_error("config: '" + analyzer + "' needs nmin and nmax");
    spec.analyzer = analyzer == "tfidf_wordngram" ? FeatureSpec::Analyzer::TfidfWordNgram
                                                  : FeatureSpec::Analyzer::TfidfChar;
    spec.nmin = obj.at("nmin").get<int>();
    spec.nmax = obj.at("nmax").get<int>();
  } else if (analyzer == "embed_avg") {
    check_keys(obj, {"analyzer", "path"}, "feature spec 'embed_avg'");
    spec.analyzer = FeatureSpec::Analyzer::EmbedAvg;
    spec.embed_path = obj.value("path", "");
    if (spec.embed_path.empty())
      throw std::runtime_error("config: 'embed_avg' needs a nonempty path");
  } else {
    throw std::runtime_error("config: unknown analyzer \"" + analyzer + "\"");
  }
  if (obj.contains("min_df")) spec.min_df = obj.at("min_df").get<std::size_t>();
  return spec;
}

json feature_spec_to_json(const FeatureSpec& spec) {
  switch (spec.analyzer) {
    case FeatureSpec::Analyzer::Count:
      return {{"analyzer", "count"}, {"min_df", spec.min_df}};
    case FeatureSpec::Analyzer::TfidfWord:
      return {{"analyzer", "tfidf_word"}, {"min_df", spec.min_df}};
    case FeatureSpec::Analyzer::TfidfWordNgram:
      return {{"analyzer", "tfidf_wordngram"}, {"nmin", spec.nmin}, {"nmax", spec.nmax},
              {"min_df", spec.min_df}};
    case FeatureSpec::Analyzer::TfidfChar:
      return {{"analyzer", "tfidf_char"}, {"nmin", spec.nmin}, {"nmax", spec.nmax},
              {"min_df", spec.min_df}};
    case FeatureSpec::Analyzer::EmbedAvg:
      return {{"analyzer", "embed_avg"}, {"path", spec.embed_path}};
  }
  throw std::logic_error("unreachable analyzer");
}

std::vector<FeatureSpec> feature_list_from_json(const json& arr, const std::string& context) {
  if (!arr.is_array())
    throw std::runtime_error("config: \"features\" must be an array in " + context);
  std::vector<FeatureSpec> specs;
  for (const auto& item : arr) specs.push_back(feature_spec_from_json(item));
  return specs;
}

BaseModelSpec base_model_from_json(const json& obj, std::uint64_t seed) {
  const std::string type = obj.value("type", "");
  BaseModelSpec spec;
  if (type == "nb") {
    check_keys(obj, {"type", "alpha"}, "model 'nb'");
    spec.kind = BaseModelKind::NaiveBayes;
    spec.nb_alpha = obj.value("alpha", 1.0);
  } else if (type == "linear") {
    check_keys(obj, {"type", "loss", "epochs", "learning_rate", "l2_alpha"}, "model 'linear'");
    spec.kind = BaseModelKind::Linear;
    spec.cfg = TrainConfig::linear_defaults();
    const std::string loss = obj.value("loss", "logistic");
    if (loss == "logistic") spec.loss = LinearLoss::Logistic;
    else if (loss == "hinge") spec.loss = LinearLoss::Hinge;
    else throw std::runtime_error("config: unknown linear loss \"" + loss + "\"");
    if (obj.contains("epochs")) spec.cfg.epochs = obj.at("epochs").get<std::size_t>();
    if (obj.contains("learning_rate")) spec.cfg.learning_rate = obj.at("learning_rate").get<double>();
    if (obj.contains("l2_alpha")) spec.cfg.l2_alpha = obj.at("l2_alpha").get<double>();
  } else if (type == "mlp") {
    check_keys(obj, {"type", "hidden_size", "epochs", "learning_rate"}, "model 'mlp'");
    spec.kind = BaseModelKind::Mlp;
    spec.cfg = TrainConfig::mlp_defaults();
    if (obj.contains("hidden_size")) spec.cfg.hidden_size = obj.at("hidden_size").get<std::size_t>();
    if (obj.contains("epochs")) spec.cfg.epochs = obj.at("epochs").get<std::size_t>();
    if (obj.contains("learning_rate")) spec.cfg.learning_rate = obj.at("learning_rate").get<double>();
  } else if (type == "gbdt") {
    check_keys(obj, {"type", "n_rounds", "max_depth", "n_bins", "min_leaf", "learning_rate"},
               "model 'gbdt'");
    spec.kind = BaseModelKind::Gbdt;
    spec.cfg = TrainConfig::gbdt_defaults();
    if (obj.contains("n_rounds")) spec.cfg.n_rounds = obj.at("n_rounds").get<std::size_t>();
    if (obj.contains("max_depth")) spec.cfg.max_depth = obj.at("max_depth").get<std::size_t>();
    if (obj.contains("n_bins")) spec.cfg.n_bins = obj.at("n_bins").get<std::size_t>();
    if (obj.contains("min_leaf")) spec.cfg.min_leaf = obj.at("min_leaf").get<std::size_t>();
    if (obj.contains("learning_rate")) spec.cfg.learning_rate = obj.at("learning_rate").get<double>();
  } else if (type == "ensemble") {
    throw std::runtime_error("config: ensembles cannot be members of ensembles");
  } else {
    throw std::runtime_error("config: unknown model type \"" + type + "\"");
  }
  spec.cfg.seed = seed;
  return spec;
}

json base_model_to_json(const BaseModelSpec& spec) {
  switch (spec.kind) {
    case BaseModelKind::NaiveBayes:
      return {{"type", "nb"}, {"alpha", spec.nb_alpha}};
    case BaseModelKind::Linear:
      return {{"type", "linear"},
              {"loss", spec.loss == LinearLoss::Logistic ? "logistic" : "hinge"},
              {"epochs", spec.cfg.epochs},
              {"learning_rate", spec.cfg.learning_rate},
              {"l2_alpha", spec.cfg.l2_alpha}};
    case BaseModelKind::Mlp:
      return {{"type", "mlp"},
              {"hidden_size", spec.cfg.hidden_size},
              {"epochs", spec.cfg.epochs},
              {"learning_rate", spec.cfg.learning_rate}};
    case BaseModelKind::Gbdt:
      return {{"type", "gbdt"},
              {"n_rounds", spec.cfg.n_rounds},
              {"max_depth", spec.cfg.max_depth},
              {"n_bins", spec.cfg.n_bins},
              {"min_leaf", spec.cfg.min_leaf},
              {"learning_rate", spec.cfg.learning_rate}};
  }
  throw std::logic_error("unreachable model kind");
}

void validate_feature_specs(const std::vector<FeatureSpec>& specs, const std::string& context) {
  if (specs.empty())
    throw std::runtime_error("config: " + context + " has no feature specs");
  for (const auto& spec : specs) {
    if (spec.analyzer == FeatureSpec::Analyzer::TfidfWordNgram ||
        spec.analyzer == FeatureSpec::Analyzer::TfidfChar) {
      if (spec.nmin < 1 || spec.nmin > spec.nmax)
        throw std::runtime_error("config: invalid n-gram range (" + std::to_string(spec.nmin) +
                                 "," + std::to_string(spec.nmax) + ") in " + context);
    }
    if (spec.min_df < 1) throw std::runtime_error("config: min_df must be >= 1 in " + context);
  }
}

void validate_config(const PipelineConfig& cfg) {
  if (const auto* ens = std::get_if<EnsembleSpec>(&cfg.model)) {
    if (ens->members.empty())
      throw std::runtime_error("config: ensemble needs at least one member");
    if (!ens->weights.empty() && ens->weights.size() != ens->members.size())
      throw std::runtime_error("config: ensemble weight count does not match member count");
    bool any_inherits = false;
    for (std::size_t m = 0; m < ens->members.size(); ++m) {
      const auto& member = ens->members[m];
      if (member.features.empty())
        any_inherits = true;
      else
        validate_feature_specs(member.features, "ensemble member " + std::to_string(m));
    }
    if (any_inherits || !cfg.features.empty())
      validate_feature_specs(cfg.features, "pipeline");
  } else {
    validate_feature_specs(cfg.features, "pipeline");
  }
}

}  // namespace

PipelineConfig config_from_json(const std::string& json_text) {
  json obj;
  try {
    obj = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("config: malformed JSON: ") + e.what());
  }
  if (!obj.is_object()) throw std::runtime_error("config: top level must be a JSON object");
  check_keys(obj, {"scheme", "preprocess", "seed", "features", "model"}, "the top level");

  PipelineConfig cfg;
  cfg.scheme = parse_scheme_kind(obj.value("scheme", "a"));
  cfg.preprocess = parse_preprocess_version(obj.value("preprocess", "none"));
  cfg.seed = obj.value("seed", std::uint64_t{42});
  if (obj.contains("features"))
    cfg.features = feature_list_from_json(obj.at("features"), "the top level");

  if (!obj.contains("model")) throw std::runtime_error("config: missing \"model\"");
  const json& model = obj.at("model");
  if (!model.is_object()) throw std::runtime_error("config: \"model\" must be an object");
  if (model.value("type", "") == "ensemble") {
    check_keys(model, {"type", "mode", "weights", "members"}, "model 'ensemble'");
    EnsembleSpec ens;
    const std::string mode = model.value("mode", "hard");
    if (mode == "hard") ens.mode = VoteMode::Hard;
    else if (mode == "soft") ens.mode = VoteMode::Soft;
    else throw std::runtime_error("config: unknown vote mode \"" + mode + "\"");
    if (model.contains("weights")) ens.weights = model.at("weights").get<std::vector<double>>();
    if (!model.contains("members") || !model.at("members").is_array())
      throw std::runtime_error("config: ensemble needs a \"members\" array");
    for (const auto& item : model.at("members")) {
      if (!item.is_object() || !item.contains("model"))
        throw std::runtime_error("config: each ensemble member needs a \"model\" object");
      check_keys(item, {"model", "features"}, "an ensemble member");
      EnsembleMemberSpec member;
      member.model = base_model_from_json(item.at("model"), cfg.seed);
      if (item.contains("features"))
        member.features = feature_list_from_json(item.at("features"), "an ensemble member");
      ens.members.push_back(std::move(member));
    }
    cfg.model = std::move(ens);
  } else {
    cfg.model = base_model_from_json(model, cfg.seed);
  }
  validate_config(cfg);
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return config_from_json(text);
}

std::string config_to_json(const PipelineConfig& cfg) {
  json features = json::array();
  for (const auto& spec : cfg.features) features.push_back(feature_spec_to_json(spec));
  json model;
  if (const auto* ens = std::get_if<EnsembleSpec>(&cfg.model)) {
    json members = json::array();
    for (const auto& member : ens->members) {
      json m = {{"model", base_model_to_json(member.model)}};
      if (!member.features.empty()) {
        json overrides = json::array();
        for (const auto& spec : member.features) overrides.push_back(feature_spec_to_json(spec));
        m["features"] = overrides;
      }
      members.push_back(std::move(m));
    }
    model = {{"type", "ensemble"},
             {"mode", ens->mode == VoteMode::Hard ? "hard" : "soft"},
             {"members", members}};
    if (!ens->weights.empty()) model["weights"] = ens->weights;
  } else {
    model = base_model_to_json(std::get<BaseModelSpec>(cfg.model));
  }
  const json out = {{"scheme", scheme_kind_name(cfg.scheme)},
                    {"preprocess", preprocess_version_name(cfg.preprocess)},
                    {"seed", cfg.seed},
                    {"features", features},
                    {"model", model}};
  return out.dump();
}

// --- presets ---

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"lr-ngram", "ensemble-a-mono", "mlp-b"};
  return names;
}

PipelineConfig preset(const std::string& name, const std::string& embeddings_path) {
  PipelineConfig cfg;
  if (name == "lr-ngram") {
    // Logistic regression over word 1-3-gram TF-IDF, subtask A.
    cfg.scheme = SchemeKind::BinaryA;
    FeatureSpec ngrams;
    ngrams.analyzer = FeatureSpec::Analyzer::TfidfWordNgram;
    ngrams.nmin = 1;
    ngrams.nmax = 3;
    cfg.features = {ngrams};
    BaseModelSpec model;
    model.kind = BaseModelKind::Linear;
    model.loss = LinearLoss::Logistic;
    model.cfg = TrainConfig::linear_defaults();
    cfg.model = model;
  } else if (name == "ensemble-a-mono") {
    // Hard vote of NB + SGD-logistic + GBDT over char 3-5-gram TF-IDF plus
    // an averaged-embedding channel when a vector file is supplied. NB is
    // bound to the sparse channel only: embedding components can be
    // negative, which multinomial NB rejects.
    cfg.scheme = SchemeKind::BinaryA;
    FeatureSpec chars;
    chars.analyzer = FeatureSpec::Analyzer::TfidfChar;
    chars.nmin = 3;
    chars.nmax = 5;
    cfg.features = {chars};
    if (!embeddings_path.empty()) {
      FeatureSpec embed;
      embed.analyzer = FeatureSpec::Analyzer::EmbedAvg;
      embed.embed_path = embeddings_path;
      cfg.features.push_back(embed);
    } else {
      std::cerr << "warning: preset 'ensemble-a-mono' has no embedding table configured; "
                   "the dense channel is omitted (char TF-IDF only)\n";
    }
    EnsembleSpec ens;
    ens.mode = VoteMode::Hard;
    EnsembleMemberSpec nb;
    nb.model.kind = BaseModelKind::NaiveBayes;
    nb.model.nb_alpha = 1.0;
    nb.features = {chars};
    EnsembleMemberSpec linear;
    linear.model.kind = BaseModelKind::Linear;
    linear.model.loss = LinearLoss::Logistic;
    linear.model.cfg = TrainConfig::linear_defaults();
    EnsembleMemberSpec gbdt;
    gbdt.model.kind = BaseModelKind::Gbdt;
    gbdt.model.cfg = TrainConfig::gbdt_defaults();
    ens.members = {nb, linear, gbdt};
    cfg.model = std::move(ens);
  } else if (name == "mlp-b") {
    // MLP over word TF-IDF for the six-way subtask.
    cfg.scheme = SchemeKind::MultiwayB;
    FeatureSpec words;
    words.analyzer = FeatureSpec::Analyzer::TfidfWord;
    cfg.features = {words};
    BaseModelSpec model;
    model.kind = BaseModelKind::Mlp;
    model.cfg = TrainConfig::mlp_defaults();
    cfg.model = model;
  } else {
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw std::runtime_error("unknown preset '" + name + "' (available: " + known + ")");
  }
  return cfg;
}

// --- fitting ---

namespace {

// Term lists for one block; word-token blocks reuse the shared token lists.
const std::vector<std::vector<std::string>>& block_termlists(
    const FeatureSpec& spec, const std::vector<std::string>& texts,
    const std::vector<std::vector<std::string>>& tokens,
    std::vector<std::vector<std::string>>& scratch) {
  switch (spec.analyzer) {
    case FeatureSpec::Analyzer::Count:
    case FeatureSpec::Analyzer::TfidfWord:
      return tokens;
    case FeatureSpec::Analyzer::TfidfWordNgram:
      scratch.assign(texts.size(), {});
      parallel_for(texts.size(), [&](std::size_t i) {
        scratch[i] = word_ngrams(tokens[i], spec.nmin, spec.nmax);
      });
      return scratch;
    case FeatureSpec::Analyzer::TfidfChar:
      scratch.assign(texts.size(), {});
      parallel_for(texts.size(), [&](std::size_t i) {
        scratch[i] = char_ngrams(texts[i], spec.nmin, spec.nmax);
      });
      return scratch;
    case FeatureSpec::Analyzer::EmbedAvg:
      break;
  }
  throw std::logic_error("block_termlists on an embedding block");
}

void append_sparse(SparseVector& acc, const SparseVector& block) {
  const auto offset = static_cast<std::uint32_t>(acc.dim);
  acc.dim += block.dim;
  for (std::size_t k = 0; k < block.indices.size(); ++k) {
    acc.indices.push_back(offset + block.indices[k]);
    acc.values.push_back(block.values[k]);
  }
}

void append_dense(SparseVector& acc, const std::vector<double>& dense) {
  const auto offset = static_cast<std::uint32_t>(acc.dim);
  acc.dim += dense.size();
  for (std::size_t k = 0; k < dense.size(); ++k) {
    if (dense[k] == 0.0) continue;
    acc.indices.push_back(offset + static_cast<std::uint32_t>(k));
    acc.values.push_back(dense[k]);
  }
}

AnalyzerKind vocab_kind(FeatureSpec::Analyzer analyzer) {
  switch (analyzer) {
    case FeatureSpec::Analyzer::TfidfWordNgram: return AnalyzerKind::WordNgram;
    case FeatureSpec::Analyzer::TfidfChar: return AnalyzerKind::CharNgram;
    default: return AnalyzerKind::Word;
  }
}

// Fits every block of one view on the (preprocessed) training texts and
// returns the transformed training matrix alongside.
std::pair<FittedFeatureView, std::vector<SparseVector>> fit_view(
    const std::vector<FeatureSpec>& specs, const std::vector<std::string>& texts,
    const std::vector<std::vector<std::string>>& tokens,
    const std::unordered_map<std::string, std::size_t>& table_of_path,
    const std::vector<EmbeddingTable>& tables) {
  FittedFeatureView view;
  std::vector<SparseVector> matrix(texts.size());
  std::vector<std::vector<std::string>> scratch;

  for (const auto& spec : specs) {
    FittedBlock block;
    block.spec = spec;
    if (spec.analyzer == FeatureSpec::Analyzer::EmbedAvg) {
      block.table_index = table_of_path.at(spec.embed_path);
      block.out_dim = tables[block.table_index].dim;
      parallel_for(texts.size(), [&](std::size_t i) {
        append_dense(matrix[i], embed_average(tokens[i], tables[block.table_index]));
      });
    } else {
      const auto& lists = block_termlists(spec, texts, tokens, scratch);
      block.vocab = fit_vocabulary(lists, spec.min_df);
      block.vocab.analyzer = vocab_kind(spec.analyzer);
      block.vocab.nmin = spec.nmin;
      block.vocab.nmax = spec.nmax;
      block.out_dim = block.vocab.size();

      std::vector<SparseVector> counts(texts.size());
      parallel_for(texts.size(), [&](std::size_t i) {
        counts[i] = count_transform(lists[i], block.vocab);
      });
      if (spec.analyzer == FeatureSpec::Analyzer::Count) {
        for (std::size_t i = 0; i < texts.size(); ++i) append_sparse(matrix[i], counts[i]);
      } else {
        block.idf = fit_idf(counts, block.vocab);
        parallel_for(texts.size(), [&](std::size_t i) {
          append_sparse(matrix[i], tfidf_transform(counts[i], block.idf));
        });
      }
    }
    view.dim += block.out_dim;
    view.blocks.push_back(std::move(block));
  }
  for (auto& row : matrix)
    if (row.dim != view.dim) throw std::logic_error("view dimension bookkeeping is off");
  return {std::move(view), std::move(matrix)};
}

AnyModel fit_base_model(const BaseModelSpec& spec, std::span<const SparseVector> x,
                        std::span<const int> y, std::size_t n_classes, std::uint64_t seed) {
  TrainConfig cfg = spec.cfg;
  cfg.seed = seed;
  switch (spec.kind) {
    case BaseModelKind::NaiveBayes: return nb_fit(x, y, n_classes, spec.nb_alpha);
    case BaseModelKind::Linear: return sgd_fit_linear(x, y, spec.loss, n_classes, cfg);
    case BaseModelKind::Mlp: return mlp_fit(x, y, n_classes, cfg);
    case BaseModelKind::Gbdt: return gbdt_fit(x, y, n_classes, cfg);
  }
  throw std::logic_error("unreachable model kind");
}

std::string specs_key(const std::vector<FeatureSpec>& specs) {
  json arr = json::array();
  for (const auto& spec : specs) arr.push_back(feature_spec_to_json(spec));
  return arr.dump();
}

}  // namespace

FittedPipeline pipeline_fit(const PipelineConfig& cfg, const Dataset& train) {
  validate_config(cfg);
  if (train.documents.empty()) throw std::runtime_error("pipeline_fit: empty training set");
  if (train.scheme.kind != cfg.scheme)
    throw std::runtime_error("pipeline_fit: dataset scheme '" +
                             scheme_kind_name(train.scheme.kind) +
                             "' does not match config scheme '" +
                             scheme_kind_name(cfg.scheme) + "'");

  FittedPipeline fp;
  fp.config = cfg;
  fp.scheme = LabelScheme::from_kind(cfg.scheme);
  const std::size_t n_classes = fp.scheme.num_classes();

  std::vector<int> labels;
  labels.reserve(train.size());
  for (const auto& doc : train.documents) {
    if (!doc.label)
      throw std::runtime_error("pipeline_fit: training document '" + doc.id +
                               "' has no label");
    if (*doc.label < 0 || static_cast<std::size_t>(*doc.label) >= n_classes)
      throw std::runtime_error("pipeline_fit: training document '" + doc.id +
                               "' has label outside the scheme");
    labels.push_back(*doc.label);
  }

  std::vector<std::string> texts(train.size());
  parallel_for(train.size(), [&](std::size_t i) {
    texts[i] = preprocess(train.documents[i].text, cfg.preprocess);
  });
  std::vector<std::vector<std::string>> tokens(train.size());
  parallel_for(train.size(), [&](std::size_t i) { tokens[i] = tokenize_words(texts[i]); });

  // Deduplicate feature views across ensemble members.
  std::vector<const std::vector<FeatureSpec>*> view_specs;
  std::unordered_map<std::string, std::size_t> view_of_key;
  auto view_index_for = [&](const std::vector<FeatureSpec>& specs) {
    const auto key = specs_key(specs);
    if (auto it = view_of_key.find(key); it != view_of_key.end()) return it->second;
    const std::size_t index = view_specs.size();
    view_of_key.emplace(key, index);
    view_specs.push_back(&specs);
    return index;
  };
  const auto* ensemble_spec = std::get_if<EnsembleSpec>(&cfg.model);
  if (ensemble_spec) {
    for (const auto& member : ensemble_spec->members)
      fp.member_views.push_back(
          view_index_for(member.features.empty() ? cfg.features : member.features));
  } else {
    fp.member_views.push_back(view_index_for(cfg.features));
  }

  // Embedding tables, loaded once per distinct path in encounter order.
  std::unordered_map<std::string, std::size_t> table_of_path;
  for (const auto* specs : view_specs)
    for (const auto& spec : *specs)
      if (spec.analyzer == FeatureSpec::Analyzer::EmbedAvg &&
          !table_of_path.contains(spec.embed_path)) {
        table_of_path.emplace(spec.embed_path, fp.tables.size());
        fp.tables.push_back(load_embeddings(spec.embed_path));
      }

  std::vector<std::vector<SparseVector>> matrices;
  for (const auto* specs : view_specs) {
    auto [view, matrix] = fit_view(*specs, texts, tokens, table_of_path, fp.tables);
    fp.views.push_back(std::move(view));
    matrices.push_back(std::move(matrix));
  }

  if (ensemble_spec) {
    std::vector<AnyModel> members;
    for (std::size_t m = 0; m < ensemble_spec->members.size(); ++m)
      members.push_back(fit_base_model(ensemble_spec->members[m].model,
                                       matrices[fp.member_views[m]], labels, n_classes,
                                       cfg.seed));
    fp.model = make_voting_ensemble(std::move(members), ensemble_spec->mode,
                                    ensemble_spec->weights);
  } else {
    fp.model = fit_base_model(std::get<BaseModelSpec>(cfg.model), matrices[0], labels,
                              n_classes, cfg.seed);
  }
  return fp;
}

SparseVector pipeline_transform(const FittedPipeline& fp, const std::string& preprocessed,
                                std::size_t view_index) {
  const auto& view = fp.views.at(view_index);
  SparseVector acc;
  std::optional<std::vector<std::string>> tokens;
  auto get_tokens = [&]() -> const std::vector<std::string>& {
    if (!tokens) tokens = tokenize_words(preprocessed);
    return *tokens;
  };
  for (const auto& block : view.blocks) {
    switch (block.spec.analyzer) {
      case FeatureSpec::Analyzer::Count:
        append_sparse(acc, count_transform(get_tokens(), block.vocab));
        break;
      case FeatureSpec::Analyzer::TfidfWord:
        append_sparse(acc, tfidf_transform(count_transform(get_tokens(), block.vocab), block.idf));
        break;
      case FeatureSpec::Analyzer::TfidfWordNgram:
        append_sparse(
            acc, tfidf_transform(
                     count_transform(word_ngrams(get_tokens(), block.spec.nmin, block.spec.nmax),
                                     block.vocab),
                     block.idf));
        break;
      case FeatureSpec::Analyzer::TfidfChar:
        append_sparse(
            acc, tfidf_transform(
                     count_transform(char_ngrams(preprocessed, block.spec.nmin, block.spec.nmax),
                                     block.vocab),
                     block.idf));
        break;
      case FeatureSpec::Analyzer::EmbedAvg:
        append_dense(acc, embed_average(get_tokens(), fp.tables[block.table_index]));
        break;
    }
  }
  return acc;
}

namespace {

template <typename Out, typename PerText>
std::vector<Out> predict_impl(const FittedPipeline& fp, std::span<const std::string> texts,
                              const PerText& per_text) {
  std::vector<Out> out(texts.size());
  parallel_for(texts.size(), [&](std::size_t i) {
    const std::string pre = preprocess(texts[i], fp.config.preprocess);
    std::vector<SparseVector> transformed(fp.views.size());
    for (std::size_t v = 0; v < fp.views.size(); ++v)
      transformed[v] = pipeline_transform(fp, pre, v);
    out[i] = per_text(transformed);
  });
  return out;
}

}  // namespace

std::vector<int> pipeline_predict(const FittedPipeline& fp, std::span<const std::string> texts) {
  if (const auto* ens = std::get_if<VotingEnsemble>(&fp.model)) {
    return predict_impl<int>(fp, texts, [&](const std::vector<SparseVector>& transformed) {
      std::vector<SparseVector> member_x;
      member_x.reserve(fp.member_views.size());
      for (auto v : fp.member_views) member_x.push_back(transformed[v]);
      return ensemble_predict_views(*ens, member_x);
    });
  }
  const auto& model = std::get<AnyModel>(fp.model);
  return predict_impl<int>(fp, texts, [&](const std::vector<SparseVector>& transformed) {
    return model_predict(model, transformed[0]);
  });
}

std::vector<std::vector<double>> pipeline_predict_proba(const FittedPipeline& fp,
                                                        std::span<const std::string> texts) {
  if (const auto* ens = std::get_if<VotingEnsemble>(&fp.model)) {
    if (ens->mode != VoteMode::Soft)
      throw std::runtime_error("no probability output from a hard-voting ensemble");
    return predict_impl<std::vector<double>>(
        fp, texts, [&](const std::vector<SparseVector>& transformed) {
          std::vector<SparseVector> member_x;
          member_x.reserve(fp.member_views.size());
          for (auto v : fp.member_views) member_x.push_back(transformed[v]);
          return ensemble_predict_proba_views(*ens, member_x);
        });
  }
  const auto& model = std::get<AnyModel>(fp.model);
  if (!model_has_proba(model))
    throw std::runtime_error("no probability model for hinge-loss linear classifiers");
  return predict_impl<std::vector<double>>(
      fp, texts, [&](const std::vector<SparseVector>& transformed) {
        return model_proba(model, transformed[0]);
      });
}

const std::vector<std::string>& pipeline_class_names(const FittedPipeline& fp) {
  return fp.scheme.class_names;
}

// --- persistence ---

namespace {

constexpr char kMagic[4] = {'M', 'G', 'T', 'D'};

void write_train_config(BinaryWriter& w, const TrainConfig& cfg) {
  w.u64(cfg.epochs);
  w.f64(cfg.learning_rate);
  w.f64(cfg.l2_alpha);
  w.u64(cfg.seed);
  w.u64(cfg.hidden_size);
  w.u64(cfg.n_rounds);
  w.u64(cfg.max_depth);
  w.u64(cfg.n_bins);
  w.u64(cfg.min_leaf);
}

TrainConfig read_train_config(BinaryReader& r) {
  TrainConfig cfg;
  cfg.epochs = r.u64();
  cfg.learning_rate = r.f64();
  cfg.l2_alpha = r.f64();
  cfg.seed = r.u64();
  cfg.hidden_size = r.u64();
  cfg.n_rounds = r.u64();
  cfg.max_depth = r.u64();
  cfg.n_bins = r.u64();
  cfg.min_leaf = r.u64();
  return cfg;
}

void write_any_model(BinaryWriter& w, const AnyModel& model) {
  if (const auto* nb = std::get_if<NaiveBayesModel>(&model)) {
    w.u8(0);
    w.u64(nb->n_classes);
    w.u64(nb->dim);
    w.f64(nb->alpha);
    w.f64_vec(nb->class_log_prior);
    w.f64_vec(nb->feature_log_prob);
  } else if (const auto* linear = std::get_if<LinearModel>(&model)) {
    w.u8(1);
    w.u64(linear->n_classes);
    w.u64(linear->dim);
    w.u8(linear->loss == LinearLoss::Logistic ? 0 : 1);
    w.f64_vec(linear->weights);
    w.f64_vec(linear->bias);
    write_train_config(w, linear->config);
  } else if (const auto* mlp = std::get_if<MLPModel>(&model)) {
    w.u8(2);
    w.u64(mlp->dim);
    w.u64(mlp->hidden);
    w.u64(mlp->n_classes);
    w.f64_vec(mlp->w1);
    w.f64_vec(mlp->b1);
    w.f64_vec(mlp->w2);
    w.f64_vec(mlp->b2);
    write_train_config(w, mlp->config);
  } else {
    const auto& gbdt = std::get<GBDTModel>(model);
    w.u8(3);
    w.u64(gbdt.n_classes);
    w.u64(gbdt.dim);
    w.f64(gbdt.learning_rate);
    w.f64_vec(gbdt.base_score);
    w.u64(gbdt.series.size());
    for (const auto& series : gbdt.series) {
      w.u64(series.size());
      for (const auto& tree : series) {
        w.u64(tree.nodes.size());
        for (const auto& node : tree.nodes) {
          w.i32(node.feature);
          w.f64(node.threshold);
          w.i32(node.left);
          w.i32(node.right);
          w.f64(node.value);
        }
      }
    }
    write_train_config(w, gbdt.config);
  }
}

AnyModel read_any_model(BinaryReader& r) {
  const auto tag = r.u8();
  switch (tag) {
    case 0: {
      NaiveBayesModel nb;
      nb.n_classes = r.u64();
      nb.dim = r.u64();
      nb.alpha = r.f64();
      nb.class_log_prior = r.f64_vec();
      nb.feature_log_prob = r.f64_vec();
      if (nb.class_log_prior.size() != nb.n_classes ||
          nb.feature_log_prob.size() != nb.n_classes * nb.dim)
        throw std::runtime_error("incompatible model file: bad naive-bayes layout");
      return nb;
    }
    case 1: {
      LinearModel linear;
      linear.n_classes = r.u64();
      linear.dim = r.u64();
      linear.loss = r.u8() == 0 ? LinearLoss::Logistic : LinearLoss::Hinge;
      linear.weights = r.f64_vec();
      linear.bias = r.f64_vec();
      linear.config = read_train_config(r);
      if (linear.weights.size() != linear.rows() * linear.dim ||
          linear.bias.size() != linear.rows())
        throw std::runtime_error("incompatible model file: bad linear layout");
      return linear;
    }
    case 2: {
      MLPModel mlp;
      mlp.dim = r.u64();
      mlp.hidden = r.u64();
      mlp.n_classes = r.u64();
      mlp.w1 = r.f64_vec();
      mlp.b1 = r.f64_vec();
      mlp.w2 = r.f64_vec();
      mlp.b2 = r.f64_vec();
      mlp.config = read_train_config(r);
      if (mlp.w1.size() != mlp.hidden * mlp.dim || mlp.b1.size() != mlp.hidden ||
          mlp.w2.size() != mlp.n_classes * mlp.hidden || mlp.b2.size() != mlp.n_classes)
        throw std::runtime_error("incompatible model file: bad mlp layout");
      return mlp;
    }
    case 3: {
      GBDTModel gbdt;
      gbdt.n_classes = r.u64();
      gbdt.dim = r.u64();
      gbdt.learning_rate = r.f64();
      gbdt.base_score = r.f64_vec();
      const auto n_series = r.u64();
      if (n_series != gbdt.base_score.size())
        throw std::runtime_error("incompatible model file: bad gbdt layout");
      gbdt.series.resize(n_series);
      for (auto& series : gbdt.series) {
        series.resize(r.u64());
        for (auto& tree : series) {
          tree.nodes.resize(r.u64());
          for (auto& node : tree.nodes) {
            node.feature = r.i32();
            node.threshold = r.f64();
            node.left = r.i32();
            node.right = r.i32();
            node.value = r.f64();
            const auto n_nodes = static_cast<int>(tree.nodes.size());
            if (node.feature >= 0 &&
                (static_cast<std::size_t>(node.feature) >= gbdt.dim || node.left < 0 ||
                 node.left >= n_nodes || node.right < 0 || node.right >= n_nodes))
              throw std::runtime_error("incompatible model file: bad gbdt tree");
          }
        }
      }
      gbdt.config = read_train_config(r);
      return gbdt;
    }
    default:
      throw std::runtime_error("incompatible model file: unknown model tag " +
                               std::to_string(tag));
  }
}

void write_vocabulary(BinaryWriter& w, const Vocabulary& vocab) {
  w.u64(vocab.n_docs_fitted);
  w.u64(vocab.terms.size());
  for (const auto& term : vocab.terms) w.str(term);
  w.u32_vec(vocab.doc_freq);
}

Vocabulary read_vocabulary(BinaryReader& r) {
  Vocabulary vocab;
  vocab.n_docs_fitted = r.u64();
  const auto n_terms = r.u64();
  vocab.terms.reserve(n_terms);
  for (std::uint64_t t = 0; t < n_terms; ++t) vocab.terms.push_back(r.str());
  vocab.doc_freq = r.u32_vec();
  if (vocab.doc_freq.size() != vocab.terms.size())
    throw std::runtime_error("incompatible model file: bad vocabulary layout");
  vocab.term_to_index.reserve(vocab.terms.size());
  for (std::uint32_t t = 0; t < vocab.terms.size(); ++t)
    vocab.term_to_index.emplace(vocab.terms[t], t);
  return vocab;
}

}  // namespace

std::vector<std::uint8_t> pipeline_to_bytes(const FittedPipeline& fp) {
  BinaryWriter payload;
  payload.str(config_to_json(fp.config));

  payload.u64(fp.tables.size());
  for (const auto& table : fp.tables) {
    payload.u64(table.dim);
    payload.u64(table.vectors.size());
    std::vector<const std::string*> words;
    words.reserve(table.vectors.size());
    for (const auto& [word, _] : table.vectors) words.push_back(&word);
    std::sort(words.begin(), words.end(),
              [](const std::string* a, const std::string* b) { return *a < *b; });
    for (const auto* word : words) {
      payload.str(*word);
      for (double v : table.vectors.at(*word)) payload.f64(v);
    }
  }

  payload.u64(fp.views.size());
  for (const auto& view : fp.views) {
    payload.u64(view.dim);
    payload.u64(view.blocks.size());
    for (const auto& block : view.blocks) {
      payload.u8(static_cast<std::uint8_t>(block.spec.analyzer));
      payload.i32(block.spec.nmin);
      payload.i32(block.spec.nmax);
      payload.u64(block.spec.min_df);
      payload.str(block.spec.embed_path);
      payload.u64(block.out_dim);
      if (block.spec.analyzer == FeatureSpec::Analyzer::EmbedAvg) {
        payload.u64(block.table_index);
      } else {
        write_vocabulary(payload, block.vocab);
        payload.f64_vec(block.idf.idf);
      }
    }
  }

  payload.u64(fp.member_views.size());
  for (auto v : fp.member_views) payload.u64(v);

  if (const auto* ens = std::get_if<VotingEnsemble>(&fp.model)) {
    payload.u8(1);
    payload.u8(ens->mode == VoteMode::Hard ? 0 : 1);
    payload.f64_vec(ens->weights);
    payload.u64(ens->members.size());
    for (const auto& member : ens->members) write_any_model(payload, member);
  } else {
    payload.u8(0);
    write_any_model(payload, std::get<AnyModel>(fp.model));
  }

  BinaryWriter file;
  file.raw(kMagic, sizeof(kMagic));
  file.u32(FittedPipeline::kFormatVersion);
  file.u64(payload.bytes().size());
  file.raw(payload.bytes().data(), payload.bytes().size());
  return file.bytes();
}

void save_pipeline(const FittedPipeline& fp, const std::string& path) {
  write_file_bytes(path, pipeline_to_bytes(fp));
}

FittedPipeline load_pipeline(const std::string& path) {
  BinaryReader r(read_file_bytes(path));
  char magic[4];
  for (char& c : magic) c = static_cast<char>(r.u8());
  if (std::string_view(magic, 4) != std::string_view(kMagic, 4))
    throw std::runtime_error("incompatible model file: bad magic bytes in '" + path + "'");
  const auto version = r.u32();
  if (version != FittedPipeline::kFormatVersion)
    throw std::runtime_error("incompatible model file: format version " +
                             std::to_string(version) + " (expected " +
                             std::to_string(FittedPipeline::kFormatVersion) + ")");
  const auto payload_size = r.u64();
  if (payload_size != r.remaining())
    throw std::runtime_error("incompatible model file: payload length mismatch in '" + path +
                             "'");

  FittedPipeline fp;
  fp.config = config_from_json(r.str());
  fp.scheme = LabelScheme::from_kind(fp.config.scheme);

  const auto n_tables = r.u64();
  for (std::uint64_t t = 0; t < n_tables; ++t) {
    EmbeddingTable table;
    table.dim = r.u64();
    const auto n_words = r.u64();
    table.vectors.reserve(n_words);
    for (std::uint64_t k = 0; k < n_words; ++k) {
      std::string word = r.str();
      std::vector<double> vec(table.dim);
      for (auto& v : vec) v = r.f64();
      table.vectors.emplace(std::move(word), std::move(vec));
    }
    fp.tables.push_back(std::move(table));
  }

  const auto n_views = r.u64();
  for (std::uint64_t v = 0; v < n_views; ++v) {
    FittedFeatureView view;
    view.dim = r.u64();
    const auto n_blocks = r.u64();
    for (std::uint64_t b = 0; b < n_blocks; ++b) {
      FittedBlock block;
      const auto analyzer = r.u8();
      if (analyzer > static_cast<std::uint8_t>(FeatureSpec::Analyzer::EmbedAvg))
        throw std::runtime_error("incompatible model file: unknown analyzer tag");
      block.spec.analyzer = static_cast<FeatureSpec::Analyzer>(analyzer);
      block.spec.nmin = r.i32();
      block.spec.nmax = r.i32();
      block.spec.min_df = r.u64();
      block.spec.embed_path = r.str();
      block.out_dim = r.u64();
      if (block.spec.analyzer == FeatureSpec::Analyzer::EmbedAvg) {
        block.table_index = r.u64();
        if (block.table_index >= fp.tables.size())
          throw std::runtime_error("incompatible model file: embedding table index out of range");
      } else {
        block.vocab = read_vocabulary(r);
        block.vocab.analyzer = vocab_kind(block.spec.analyzer);
        block.vocab.nmin = block.spec.nmin;
        block.vocab.nmax = block.spec.nmax;
        block.idf.idf = r.f64_vec();
      }
      view.blocks.push_back(std::move(block));
    }
    fp.views.push_back(std::move(view));
  }

  const auto n_members = r.u64();
  for (std::uint64_t m = 0; m < n_members; ++m) {
    fp.member_views.push_back(r.u64());
    if (fp.member_views.back() >= fp.views.size())
      throw std::runtime_error("incompatible model file: view index out of range");
  }

  const auto model_tag = r.u8();
  if (model_tag == 1) {
    const VoteMode mode = r.u8() == 0 ? VoteMode::Hard : VoteMode::Soft;
    auto weights = r.f64_vec();
    const auto member_count = r.u64();
    std::vector<AnyModel> members;
    for (std::uint64_t m = 0; m < member_count; ++m) members.push_back(read_any_model(r));
    fp.model = make_voting_ensemble(std::move(members), mode, std::move(weights));
  } else if (model_tag == 0) {
    fp.model = read_any_model(r);
  } else {
    throw std::runtime_error("incompatible model file: unknown pipeline model tag");
  }

  if (!r.at_end())
    throw std::runtime_error("incompatible model file: trailing bytes in '" + path + "'");
  return fp;
}

}  // namespace mgtd
