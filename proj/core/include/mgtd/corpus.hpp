#ifndef MGTD_CORPUS_HPP
#define MGTD_CORPUS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mgtd {

// One text sample. Optional fields stay absent when missing from the input,
// they are never defaulted to empty strings.
struct Document {
  std::string id;
  std::string text;
  std::optional<int> label;
  std::optional<std::string> generator;  // the "model" field of the task files
  std::optional<std::string> source;
  std::optional<std::string> language;
};

enum class SchemeKind { BinaryA, MultiwayB };

// Class-id space for one of the two subtasks. BinaryA is {human, machine},
// MultiwayB the six generator classes in task order.
struct LabelScheme {
  SchemeKind kind = SchemeKind::BinaryA;
  std::vector<std::string> class_names;

  static LabelScheme binary_a();
  static LabelScheme multiway_b();
  static LabelScheme from_kind(SchemeKind kind);

  std::size_t num_classes() const { return class_names.size(); }
};

SchemeKind parse_scheme_kind(std::string_view name);  // "a" | "b"
std::string scheme_kind_name(SchemeKind kind);

int encode_label(std::string_view name, const LabelScheme& scheme);
std::string decode_label(int id, const LabelScheme& scheme);

struct Dataset {
  std::vector<Document> documents;
  LabelScheme scheme;
  std::string split_name = "train";

  std::size_t size() const { return documents.size(); }
};

// Reads a JSONL file with one {"id","text","label","model","source","language"}
// object per line. Unknown extra fields are ignored; a missing "id" becomes
// the 0-based line number. String labels resolve through the scheme.
Dataset load_jsonl(const std::string& path, const LabelScheme& scheme,
                   std::string split_name = "");

struct TokenLengthStats {
  std::size_t min = 0;
  std::size_t max = 0;
  double mean = 0.0;
};

struct CorpusStats {
  std::size_t n_docs = 0;
  std::size_t n_empty = 0;  // documents that tokenize to nothing
  std::map<int, std::size_t> per_class;
  TokenLengthStats token_count;
};

// Per-split counts and token-length statistics; token counts come from
// tokenize_words so they are reproducible.
CorpusStats compute_stats(const Dataset& ds);

std::string stats_to_json(const CorpusStats& stats, const Dataset& ds);

}  // namespace mgtd

#endif  // MGTD_CORPUS_HPP
