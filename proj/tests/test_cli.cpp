#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "mgtd/cli.hpp"
#include "support/synthetic.hpp"
#include "support/tempdir.hpp"

using namespace mgtd;
using testsupport::make_synthetic_corpus;
using testsupport::split_corpus;
using testsupport::SyntheticSpec;
using testsupport::TempDir;

namespace {

int run_cli(std::initializer_list<std::string> args) {
  return cli::run(std::vector<std::string>(args));
}

struct Corpus {
  TempDir dir;
  std::string train_path;
  std::string test_path;

  Corpus() {
    SyntheticSpec spec;
    spec.n_docs = 160;
    spec.seed = 2025;
    const auto ds = make_synthetic_corpus(spec);
    const auto [train, test] = split_corpus(ds, 120);
    train_path = dir.write("train.jsonl", testsupport::to_jsonl(train));
    test_path = dir.write("test.jsonl", testsupport::to_jsonl(test));
  }
};

}  // namespace

TEST_CASE("stats subcommand writes corpus statistics") {
  Corpus corpus;
  const auto out = corpus.dir.file("stats.json");
  CHECK(run_cli({"stats", "--scheme", "a", "--out", out, corpus.train_path}) == cli::kExitOk);
  const auto parsed = nlohmann::json::parse(testsupport::slurp(out));
  CHECK(parsed.at("n_docs").get<int>() == 120);
  CHECK(parsed.at("per_class").size() == 2);
  CHECK(parsed.at("token_count").at("max").get<int>() >= 1);
}

TEST_CASE("train / eval / predict end to end") {
  Corpus corpus;
  const auto model = corpus.dir.file("m.mgtd");
  CHECK(run_cli({"train", "--preset", "lr-ngram", "--scheme", "a", corpus.train_path, "--out",
                 model}) == cli::kExitOk);

  const auto metrics_path = corpus.dir.file("metrics.json");
  CHECK(run_cli({"eval", "--model", model, "--out", metrics_path, corpus.test_path}) ==
        cli::kExitOk);
  const auto metrics = nlohmann::json::parse(testsupport::slurp(metrics_path));
  CHECK(metrics.at("accuracy").get<double>() > 0.8);
  CHECK(metrics.at("n").get<int>() == 40);

  const auto preds_path = corpus.dir.file("preds.tsv");
  CHECK(run_cli({"predict", "--model", model, "--out", preds_path, corpus.test_path}) ==
        cli::kExitOk);
  std::istringstream preds(testsupport::slurp(preds_path));
  std::string line;
  std::size_t count = 0;
  while (std::getline(preds, line)) {
    const auto tab = line.find('\t');
    REQUIRE(tab != std::string::npos);
    CHECK(line.substr(0, tab) == "d" + std::to_string(120 + count));
    const auto label = line.substr(tab + 1);
    CHECK((label == "0" || label == "1"));
    ++count;
  }
  CHECK(count == 40);

  const auto names_path = corpus.dir.file("named.tsv");
  CHECK(run_cli({"predict", "--model", model, "--labels-as-names", "--out", names_path,
                 corpus.test_path}) == cli::kExitOk);
  std::istringstream named(testsupport::slurp(names_path));
  while (std::getline(named, line)) {
    const auto label = line.substr(line.find('\t') + 1);
    CHECK((label == "human" || label == "machine"));
  }
}

TEST_CASE("same argv and seed give byte-identical artifacts") {
  Corpus corpus;
  const auto model_a = corpus.dir.file("a.mgtd");
  const auto model_b = corpus.dir.file("b.mgtd");
  CHECK(run_cli({"train", "--preset", "lr-ngram", "--seed", "9", corpus.train_path, "--out",
                 model_a}) == cli::kExitOk);
  CHECK(run_cli({"train", "--preset", "lr-ngram", "--seed", "9", corpus.train_path, "--out",
                 model_b}) == cli::kExitOk);
  CHECK(testsupport::slurp(model_a) == testsupport::slurp(model_b));

  const auto metrics_a = corpus.dir.file("ma.json");
  const auto metrics_b = corpus.dir.file("mb.json");
  CHECK(run_cli({"eval", "--model", model_a, "--out", metrics_a, corpus.test_path}) ==
        cli::kExitOk);
  CHECK(run_cli({"eval", "--model", model_b, "--out", metrics_b, corpus.test_path}) ==
        cli::kExitOk);
  CHECK(testsupport::slurp(metrics_a) == testsupport::slurp(metrics_b));
}

TEST_CASE("train accepts a config file and flags override it") {
  Corpus corpus;
  const auto config = corpus.dir.write(
      "config.json",
      "{\"scheme\":\"a\",\"seed\":1,"
      "\"features\":[{\"analyzer\":\"tfidf_word\"}],"
      "\"model\":{\"type\":\"linear\",\"loss\":\"logistic\",\"epochs\":5}}");
  const auto model = corpus.dir.file("cfg.mgtd");
  CHECK(run_cli({"train", "--config", config, corpus.train_path, "--out", model}) ==
        cli::kExitOk);

  // --seed overrides the file's seed: artifacts with explicit seed differ
  // from the file default only in the recorded config (weights may match),
  // so compare against a run with the same explicit seed instead
  const auto model_seeded = corpus.dir.file("cfg9.mgtd");
  const auto model_seeded2 = corpus.dir.file("cfg9b.mgtd");
  CHECK(run_cli({"train", "--config", config, "--seed", "9", corpus.train_path, "--out",
                 model_seeded}) == cli::kExitOk);
  CHECK(run_cli({"train", "--config", config, "--seed", "9", corpus.train_path, "--out",
                 model_seeded2}) == cli::kExitOk);
  CHECK(testsupport::slurp(model_seeded) == testsupport::slurp(model_seeded2));
  CHECK(testsupport::slurp(model) != testsupport::slurp(model_seeded));
}

TEST_CASE("usage errors exit 1") {
  CHECK(run_cli({"train"}) == cli::kExitUsage);                       // no input
  CHECK(run_cli({"nonsense"}) == cli::kExitUsage);                    // unknown subcommand
  CHECK(run_cli({}) == cli::kExitUsage);                              // no subcommand
  Corpus corpus;
  CHECK(run_cli({"train", corpus.train_path}) == cli::kExitUsage);    // no preset/config
  CHECK(run_cli({"train", "--preset", "nope", corpus.train_path}) == cli::kExitUsage);
  CHECK(run_cli({"stats", "--scheme", "c", corpus.train_path}) == cli::kExitUsage);
  CHECK(run_cli({"eval", corpus.test_path}) == cli::kExitUsage);      // missing --model
}

TEST_CASE("data errors exit 2") {
  TempDir dir;
  const auto bad = dir.write("bad.jsonl", "{\"text\":\"x\",\"label\":9}\n");
  CHECK(run_cli({"stats", "--scheme", "a", bad}) == cli::kExitData);

  const auto missing = dir.file("missing.jsonl");
  CHECK(run_cli({"stats", "--scheme", "a", missing}) == cli::kExitData);

  const auto not_model = dir.write("not_model.bin", "garbage");
  const auto ok = dir.write("ok.jsonl", "{\"text\":\"x\",\"label\":0}\n");
  CHECK(run_cli({"eval", "--model", not_model, ok}) == cli::kExitData);
}

TEST_CASE("presets subcommand lists known recipes") {
  CHECK(run_cli({"presets"}) == cli::kExitOk);
}
