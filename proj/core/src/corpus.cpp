#include "mgtd/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

#include "mgtd/features.hpp"

namespace mgtd {

using nlohmann::json;

LabelScheme LabelScheme::binary_a() {
  return LabelScheme{SchemeKind::BinaryA, {"human", "machine"}};
}

LabelScheme LabelScheme::multiway_b() {
  return LabelScheme{SchemeKind::MultiwayB,
                     {"human", "chatGPT", "cohere", "davinci", "bloomz", "dolly"}};
}

LabelScheme LabelScheme::from_kind(SchemeKind kind) {
  return kind == SchemeKind::BinaryA ? binary_a() : multiway_b();
}

SchemeKind parse_scheme_kind(std::string_view name) {
  if (name == "a" || name == "A") return SchemeKind::BinaryA;
  if (name == "b" || name == "B") return SchemeKind::MultiwayB;
  throw std::runtime_error("unknown scheme '" + std::string(name) + "' (expected a or b)");
}

std::string scheme_kind_name(SchemeKind kind) {
  return kind == SchemeKind::BinaryA ? "a" : "b";
}

int encode_label(std::string_view name, const LabelScheme& scheme) {
  auto it = std::find(scheme.class_names.begin(), scheme.class_names.end(), name);
  if (it == scheme.class_names.end())
    throw std::runtime_error("label '" + std::string(name) + "' not in scheme");
  return static_cast<int>(it - scheme.class_names.begin());
}

std::string decode_label(int id, const LabelScheme& scheme) {
  if (id < 0 || static_cast<std::size_t>(id) >= scheme.class_names.size())
    throw std::runtime_error("label id " + std::to_string(id) + " not in scheme");
  return scheme.class_names[static_cast<std::size_t>(id)];
}

namespace {

std::optional<std::string> opt_string_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (it->is_string()) return it->get<std::string>();
  return it->dump();
}

int resolve_label(const json& value, const LabelScheme& scheme, std::size_t line_no) {
  if (value.is_string()) return encode_label(value.get<std::string>(), scheme);
  if (value.is_number_integer()) {
    const auto id = value.get<long long>();
    if (id < 0 || static_cast<std::size_t>(id) >= scheme.num_classes())
      throw std::runtime_error("line " + std::to_string(line_no) + ": label " +
                               std::to_string(id) + " not in scheme");
    return static_cast<int>(id);
  }
  throw std::runtime_error("line " + std::to_string(line_no) +
                           ": label must be an integer or a class name, got " + value.dump());
}

}  // namespace

Dataset load_jsonl(const std::string& path, const LabelScheme& scheme, std::string split_name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");

  Dataset ds;
  ds.scheme = scheme;
  ds.split_name =
      split_name.empty() ? std::filesystem::path(path).stem().string() : std::move(split_name);

  std::string line;
  std::size_t line_no = 0;
  std::unordered_set<std::string> seen_ids;
  while (std::getline(in, line)) {
    json obj;
    try {
      obj = json::parse(line);  // also rejects invalid UTF-8
    } catch (const json::parse_error& e) {
      throw std::runtime_error(path + ": malformed JSON at line " + std::to_string(line_no + 1) +
                               ": " + e.what());
    }
    if (!obj.is_object())
      throw std::runtime_error(path + ": line " + std::to_string(line_no + 1) +
                               " is not a JSON object");
    auto text_it = obj.find("text");
    if (text_it == obj.end() || !text_it->is_string())
      throw std::runtime_error(path + ": line " + std::to_string(line_no + 1) +
                               " is missing a string \"text\" field");

    Document doc;
    doc.text = text_it->get<std::string>();
    if (auto id_it = obj.find("id"); id_it != obj.end() && !id_it->is_null()) {
      doc.id = id_it->is_string() ? id_it->get<std::string>() : id_it->dump();
    } else {
      doc.id = std::to_string(line_no);
    }
    if (auto label_it = obj.find("label"); label_it != obj.end() && !label_it->is_null()) {
      try {
        doc.label = resolve_label(*label_it, scheme, line_no + 1);
      } catch (const std::runtime_error& e) {
        throw std::runtime_error(path + ": " + e.what());
      }
    }
    doc.generator = opt_string_field(obj, "model");
    doc.source = opt_string_field(obj, "source");
    doc.language = opt_string_field(obj, "language");
    if (!seen_ids.insert(doc.id).second)
      throw std::runtime_error(path + ": line " + std::to_string(line_no + 1) +
                               ": duplicate document id '" + doc.id + "'");
    ds.documents.push_back(std::move(doc));
    ++line_no;
  }
  return ds;
}

CorpusStats compute_stats(const Dataset& ds) {
  CorpusStats stats;
  stats.n_docs = ds.size();
  if (ds.documents.empty()) return stats;

  std::size_t min_tokens = std::numeric_limits<std::size_t>::max();
  std::size_t max_tokens = 0;
  std::size_t total_tokens = 0;
  for (const auto& doc : ds.documents) {
    const std::size_t n = tokenize_words(doc.text).size();
    if (n == 0) ++stats.n_empty;
    min_tokens = std::min(min_tokens, n);
    max_tokens = std::max(max_tokens, n);
    total_tokens += n;
    if (doc.label) ++stats.per_class[*doc.label];
  }
  stats.token_count.min = min_tokens;
  stats.token_count.max = max_tokens;
  stats.token_count.mean = static_cast<double>(total_tokens) / static_cast<double>(stats.n_docs);
  return stats;
}

std::string stats_to_json(const CorpusStats& stats, const Dataset& ds) {
  json per_class = json::array();
  for (const auto& [id, count] : stats.per_class) {
    per_class.push_back({{"id", id},
                         {"name", decode_label(id, ds.scheme)},
                         {"count", count}});
  }
  json out = {
      {"split", ds.split_name},
      {"scheme", scheme_kind_name(ds.scheme.kind)},
      {"n_docs", stats.n_docs},
      {"n_empty", stats.n_empty},
      {"per_class", per_class},
      {"token_count",
       {{"min", stats.token_count.min},
        {"max", stats.token_count.max},
        {"mean", stats.token_count.mean}}},
  };
  return out.dump(2);
}

}  // namespace mgtd
