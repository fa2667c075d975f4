#include "mgtd/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "mgtd/corpus.hpp"
#include "mgtd/eval.hpp"
#include "mgtd/pipeline.hpp"

namespace mgtd::cli {

namespace {

struct CommonFlags {
  std::string scheme = "a";
  std::string preprocess;
  std::string config_path;
  std::string model_path;
  std::string out_path;
  std::string embeddings_path;
  std::string preset_name;
  std::uint64_t seed = 42;
  bool labels_as_names = false;
};

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("short write to '" + path + "'");
}

int cmd_stats(const CommonFlags& flags, const std::string& input) {
  const auto scheme = LabelScheme::from_kind(parse_scheme_kind(flags.scheme));
  const auto ds = load_jsonl(input, scheme);
  const auto stats = compute_stats(ds);
  const auto text = stats_to_json(stats, ds) + "\n";
  std::cout << text;
  if (!flags.out_path.empty()) write_text_file(flags.out_path, text);
  return kExitOk;
}

// Builds the pipeline config from --preset or --config, then applies the
// flag overrides (flags win over file values).
PipelineConfig resolve_config(const CommonFlags& flags, const CLI::App* cmd) {
  PipelineConfig cfg;
  if (!flags.preset_name.empty())
    cfg = preset(flags.preset_name, flags.embeddings_path);
  else
    cfg = load_config(flags.config_path);

  if (cmd->count("--scheme")) cfg.scheme = parse_scheme_kind(flags.scheme);
  if (cmd->count("--preprocess")) cfg.preprocess = parse_preprocess_version(flags.preprocess);
  if (cmd->count("--seed")) cfg.seed = flags.seed;
  return cfg;
}

bool config_uses_embeddings(const PipelineConfig& cfg) {
  auto has_embed = [](const std::vector<FeatureSpec>& specs) {
    for (const auto& s : specs)
      if (s.analyzer == FeatureSpec::Analyzer::EmbedAvg) return true;
    return false;
  };
  if (has_embed(cfg.features)) return true;
  if (const auto* ens = std::get_if<EnsembleSpec>(&cfg.model))
    for (const auto& member : ens->members)
      if (has_embed(member.features)) return true;
  return false;
}

int cmd_train(const CommonFlags& flags, const CLI::App* cmd, const std::string& input) {
  const auto cfg = resolve_config(flags, cmd);
  if (!flags.embeddings_path.empty() && !config_uses_embeddings(cfg))
    std::cerr << "mgtdetect: warning: --embeddings given but the pipeline has no dense "
                 "channel; the vector file is ignored\n";
  std::cerr << "mgtdetect train: seed=" << cfg.seed << " scheme=" << scheme_kind_name(cfg.scheme)
            << " preprocess=" << preprocess_version_name(cfg.preprocess) << "\n";
  const auto scheme = LabelScheme::from_kind(cfg.scheme);
  const auto train = load_jsonl(input, scheme);
  const auto fitted = pipeline_fit(cfg, train);
  const std::string out = flags.out_path.empty() ? "model.mgtd" : flags.out_path;
  save_pipeline(fitted, out);
  std::cerr << "mgtdetect train: wrote " << out << "\n";
  return kExitOk;
}

int cmd_eval(const CommonFlags& flags, const std::string& input) {
  const auto fitted = load_pipeline(flags.model_path);
  const auto ds = load_jsonl(input, fitted.scheme);
  const auto metrics = evaluate(fitted, ds);
  std::cout << metrics_to_text(metrics);
  const std::string out = flags.out_path.empty() ? "metrics.json" : flags.out_path;
  write_text_file(out, metrics_to_json(metrics) + "\n");
  std::cerr << "mgtdetect eval: wrote " << out << "\n";
  return kExitOk;
}

int cmd_predict(const CommonFlags& flags, const std::string& input) {
  const auto fitted = load_pipeline(flags.model_path);
  const auto ds = load_jsonl(input, fitted.scheme);
  std::vector<std::string> texts;
  texts.reserve(ds.size());
  for (const auto& doc : ds.documents) texts.push_back(doc.text);
  const auto preds = pipeline_predict(fitted, texts);

  std::string lines;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    lines += ds.documents[i].id;
    lines += '\t';
    lines += flags.labels_as_names ? decode_label(preds[i], fitted.scheme)
                                   : std::to_string(preds[i]);
    lines += '\n';
  }
  if (flags.out_path.empty())
    std::cout << lines;
  else
    write_text_file(flags.out_path, lines);
  return kExitOk;
}

int cmd_presets() {
  for (const auto& name : preset_names()) std::cout << name << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"machine-generated text detector"};
  app.name("mgtdetect");
  app.require_subcommand(1);

  CommonFlags flags;
  std::string input;

  auto add_common = [&flags](CLI::App* cmd) {
    cmd->add_option("--scheme", flags.scheme, "label scheme: a (binary) or b (6-way)")
        ->check(CLI::IsMember({"a", "b"}));
    cmd->add_option("--preprocess", flags.preprocess, "cleaning regime")
        ->check(CLI::IsMember({"none", "v1", "v2"}));
    cmd->add_option("--seed", flags.seed, "RNG seed (default 42)");
    cmd->add_option("--out", flags.out_path, "output path");
    cmd->add_option("--embeddings", flags.embeddings_path, "pretrained vector file");
  };

  auto* stats = app.add_subcommand("stats", "corpus statistics as JSON");
  add_common(stats);
  stats->add_option("input", input, "JSONL dataset")->required();

  auto* train = app.add_subcommand("train", "fit a detector and write a model file");
  add_common(train);
  train->add_option("--preset", flags.preset_name, "named pipeline recipe (see presets)");
  train->add_option("--config", flags.config_path, "pipeline config JSON file")
      ->check(CLI::ExistingFile);
  train->add_option("input", input, "labeled training JSONL")->required();

  auto* eval_cmd = app.add_subcommand("eval", "score a labeled JSONL and write metrics.json");
  add_common(eval_cmd);
  eval_cmd->add_option("--model", flags.model_path, "trained model file")
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("input", input, "labeled JSONL")->required();

  auto* predict = app.add_subcommand("predict", "write one id<TAB>label line per document");
  add_common(predict);
  predict->add_option("--model", flags.model_path, "trained model file")
      ->required()
      ->check(CLI::ExistingFile);
  predict->add_flag("--labels-as-names", flags.labels_as_names,
                    "emit class names instead of ids");
  predict->add_option("input", input, "JSONL to classify")->required();

  auto* presets = app.add_subcommand("presets", "list available presets");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      app.exit(e);
      return kExitOk;
    }
    std::cerr << "mgtdetect: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (stats->parsed()) return cmd_stats(flags, input);
    if (train->parsed()) {
      // config source validated before any I/O
      if (flags.preset_name.empty() == flags.config_path.empty()) {
        std::cerr << "mgtdetect: train needs exactly one of --preset or --config\n";
        return kExitUsage;
      }
      const auto& known = preset_names();
      if (!flags.preset_name.empty() &&
          std::find(known.begin(), known.end(), flags.preset_name) == known.end()) {
        std::string available;
        for (const auto& n : known) available += (available.empty() ? "" : ", ") + n;
        std::cerr << "mgtdetect: unknown preset '" << flags.preset_name
                  << "' (available: " << available << ")\n";
        return kExitUsage;
      }
      return cmd_train(flags, train, input);
    }
    if (eval_cmd->parsed()) return cmd_eval(flags, input);
    if (predict->parsed()) return cmd_predict(flags, input);
    if (presets->parsed()) return cmd_presets();
  } catch (const std::exception& e) {
    std::cerr << "mgtdetect: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  args.reserve(static_cast<std::size_t>(argc > 0 ? argc - 1 : 0));
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace mgtd::cli
