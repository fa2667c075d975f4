#include <doctest.h>

#include "mgtd/corpus.hpp"
#include "mgtd/features.hpp"
#include "support/tempdir.hpp"

using namespace mgtd;
using testsupport::TempDir;

TEST_CASE("label schemes have the task class lists") {
  const auto a = LabelScheme::binary_a();
  REQUIRE(a.class_names == std::vector<std::string>{"human", "machine"});
  const auto b = LabelScheme::multiway_b();
  REQUIRE(b.class_names ==
          std::vector<std::string>{"human", "chatGPT", "cohere", "davinci", "bloomz", "dolly"});
}

TEST_CASE("encode/decode labels") {
  const auto b = LabelScheme::multiway_b();
  CHECK(encode_label("human", b) == 0);
  CHECK(decode_label(3, b) == "davinci");
  CHECK_THROWS_WITH_AS(encode_label("gpt5", b), "label 'gpt5' not in scheme",
                       std::runtime_error);
  CHECK_THROWS(decode_label(6, b));
  CHECK_THROWS(decode_label(-1, b));
  for (const auto& scheme : {LabelScheme::binary_a(), LabelScheme::multiway_b()})
    for (const auto& name : scheme.class_names)
      CHECK(decode_label(encode_label(name, scheme), scheme) == name);
}

TEST_CASE("load_jsonl maps fields and resolves labels") {
  TempDir dir;
  const auto path = dir.write("train.jsonl",
                              "{\"text\":\"hi\",\"label\":0,\"id\":\"a\"}\n"
                              "{\"text\":\"x\",\"label\":\"machine\",\"model\":\"chatGPT\","
                              "\"source\":\"wikihow\",\"language\":\"en\",\"extra\":1}\n"
                              "{\"text\":\"no label\"}\n");
  const auto ds = load_jsonl(path, LabelScheme::binary_a());
  REQUIRE(ds.size() == 3);
  CHECK(ds.documents[0].id == "a");
  CHECK(ds.documents[0].text == "hi");
  CHECK(ds.documents[0].label == 0);
  CHECK(!ds.documents[0].generator.has_value());
  CHECK(ds.documents[1].label == 1);
  CHECK(ds.documents[1].generator == "chatGPT");
  CHECK(ds.documents[1].source == "wikihow");
  CHECK(ds.documents[1].language == "en");
  CHECK(ds.documents[1].id == "1");  // synthesized from the 0-based line number
  CHECK(!ds.documents[2].label.has_value());
  CHECK(ds.split_name == "train");
}

TEST_CASE("load_jsonl resolves string labels through the scheme") {
  TempDir dir;
  const auto path = dir.write("b.jsonl", "{\"text\":\"x\",\"label\":\"dolly\"}\n");
  const auto ds = load_jsonl(path, LabelScheme::multiway_b());
  CHECK(ds.documents[0].label == 5);
}

TEST_CASE("load_jsonl error paths") {
  TempDir dir;
  CHECK_THROWS(load_jsonl(dir.file("missing.jsonl"), LabelScheme::binary_a()));

  const auto bad_json = dir.write("bad.jsonl", "{\"text\":\"ok\"}\nnot json\n");
  CHECK_THROWS_WITH_AS(load_jsonl(bad_json, LabelScheme::binary_a()),
                       doctest::Contains("line 2"), std::runtime_error);

  const auto bad_label = dir.write("label.jsonl", "{\"text\":\"x\",\"label\":7}\n");
  CHECK_THROWS_WITH_AS(load_jsonl(bad_label, LabelScheme::multiway_b()),
                       doctest::Contains("label 7"), std::runtime_error);

  const auto bad_name = dir.write("name.jsonl", "{\"text\":\"x\",\"label\":\"gpt5\"}\n");
  CHECK_THROWS_WITH_AS(load_jsonl(bad_name, LabelScheme::multiway_b()),
                       doctest::Contains("gpt5"), std::runtime_error);

  const auto no_text = dir.write("notext.jsonl", "{\"label\":0}\n");
  CHECK_THROWS(load_jsonl(no_text, LabelScheme::binary_a()));

  std::string invalid_utf8 = "{\"text\":\"a";
  invalid_utf8 += static_cast<char>(0xff);
  invalid_utf8 += "\"}\n";
  const auto bad_bytes = dir.write("bytes.jsonl", invalid_utf8);
  CHECK_THROWS(load_jsonl(bad_bytes, LabelScheme::binary_a()));

  const auto dup = dir.write("dup.jsonl",
                             "{\"text\":\"a\",\"id\":\"x\"}\n{\"text\":\"b\",\"id\":\"x\"}\n");
  CHECK_THROWS_WITH_AS(load_jsonl(dup, LabelScheme::binary_a()), doctest::Contains("duplicate"),
                       std::runtime_error);
}

TEST_CASE("load_jsonl preserves order and count") {
  TempDir dir;
  std::string lines;
  for (int i = 0; i < 25; ++i)
    lines += "{\"text\":\"doc " + std::to_string(i) + "\",\"label\":" + std::to_string(i % 2) +
             "}\n";
  const auto ds = load_jsonl(dir.write("many.jsonl", lines), LabelScheme::binary_a());
  REQUIRE(ds.size() == 25);
  for (int i = 0; i < 25; ++i) {
    CHECK(ds.documents[static_cast<std::size_t>(i)].text == "doc " + std::to_string(i));
    CHECK(ds.documents[static_cast<std::size_t>(i)].id == std::to_string(i));
  }
}

TEST_CASE("compute_stats counts tokens and empties") {
  Dataset ds;
  ds.scheme = LabelScheme::binary_a();
  ds.documents = {{"0", "a b", 0, {}, {}, {}}, {"1", "", 0, {}, {}, {}}};
  auto stats = compute_stats(ds);
  CHECK(stats.n_docs == 2);
  CHECK(stats.n_empty == 1);
  CHECK(stats.token_count.min == 0);
  CHECK(stats.token_count.max == 2);
  CHECK(stats.token_count.mean == doctest::Approx(1.0));

  Dataset empty;
  empty.scheme = LabelScheme::binary_a();
  auto zero = compute_stats(empty);
  CHECK(zero.n_docs == 0);
  CHECK(zero.n_empty == 0);
  CHECK(zero.token_count.mean == 0.0);

  Dataset labeled;
  labeled.scheme = LabelScheme::binary_a();
  labeled.documents = {{"0", "x", 0, {}, {}, {}},
                       {"1", "y", 0, {}, {}, {}},
                       {"2", "z", 1, {}, {}, {}}};
  auto by_class = compute_stats(labeled);
  CHECK(by_class.per_class.at(0) == 2);
  CHECK(by_class.per_class.at(1) == 1);
}

TEST_CASE("n_empty agrees with a brute-force token count") {
  Dataset ds;
  ds.scheme = LabelScheme::binary_a();
  const std::vector<std::string> texts = {"", "  ", "#!?", "one", "two words", "\t\n", "7"};
  for (std::size_t i = 0; i < texts.size(); ++i)
    ds.documents.push_back({std::to_string(i), texts[i], {}, {}, {}, {}});
  std::size_t expected = 0;
  for (const auto& t : texts)
    if (tokenize_words(t).empty()) ++expected;
  CHECK(compute_stats(ds).n_empty == expected);
}
