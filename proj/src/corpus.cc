/*
 * Copyright 2026 The Contrank Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "contrank/corpus.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "contrank/error.h"
#include "contrank/random.h"
#include "json.hpp"

namespace contrank {
namespace {

using nlohmann::json;

constexpr std::array<std::pair<ReformulationType, std::string_view>, 6>
    kReformulationNames = {{
        {ReformulationType::kHeadline, "headline"},
        {ReformulationType::kParaphrase, "paraphrase"},
        {ReformulationType::kVoice, "voice"},
        {ReformulationType::kPunctuation, "punctuation"},
        {ReformulationType::kTypo, "typo"},
        {ReformulationType::kContraction, "contraction"},
    }};

struct FlatRecord {
  std::string query_id;
  std::string query;
  std::string doc_id;
  std::string doc;
  int label = 0;
};

int ParseLabel(std::size_t line, std::string_view text) {
  if (text == "0") return 0;
  if (text == "1") return 1;
  throw ParseError(line, "label must be 0 or 1, got '" + std::string(text) +
                             "'");
}

std::string RequireString(std::size_t line, const json& record,
                          const char* field) {
  auto it = record.find(field);
  if (it == record.end()) {
    throw ParseError(line, std::string("missing field '") + field + "'");
  }
  if (!it->is_string()) {
    throw ParseError(line, std::string("field '") + field +
                               "' must be a string");
  }
  std::string value = it->get<std::string>();
  if (value.empty()) {
    throw ParseError(line, std::string("field '") + field +
                               "' must be non-empty");
  }
  return value;
}

FlatRecord ParseJsonRecord(std::size_t line, const std::string& text) {
  json record;
  try {
    record = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(line, std::string("invalid json: ") + e.what());
  }
  if (!record.is_object()) throw ParseError(line, "record is not an object");
  FlatRecord out;
  out.query_id = RequireString(line, record, "query_id");
  out.query = RequireString(line, record, "query");
  out.doc_id = RequireString(line, record, "doc_id");
  out.doc = RequireString(line, record, "doc");
  auto label = record.find("label");
  if (label == record.end()) throw ParseError(line, "missing field 'label'");
  if (label->is_number_integer()) {
    out.label = ParseLabel(line, std::to_string(label->get<long long>()));
  } else if (label->is_string()) {
    out.label = ParseLabel(line, label->get<std::string>());
  } else {
    throw ParseError(line, "label must be 0 or 1");
  }
  return out;
}

FlatRecord ParseTsvRecord(std::size_t line, const std::string& text) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = text.find('\t', start);
    fields.push_back(text.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  if (fields.size() != 5) {
    throw ParseError(line, "expected 5 tab-separated fields, got " +
                               std::to_string(fields.size()));
  }
  static constexpr const char* kNames[] = {"query_id", "query", "doc_id",
                                           "doc"};
  for (int i = 0; i < 4; ++i) {
    if (fields[i].empty()) {
      throw ParseError(line, std::string("field '") + kNames[i] +
                                 "' must be non-empty");
    }
  }
  return {fields[0], fields[1], fields[2], fields[3],
          ParseLabel(line, fields[4])};
}

bool IsBlank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) {
    return std::isspace(c);
  });
}

std::ifstream OpenOrThrow(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

}  // namespace

std::string_view ReformulationTypeName(ReformulationType type) {
  for (const auto& [value, name] : kReformulationNames) {
    if (value == type) return name;
  }
  return "unknown";
}

ReformulationType ParseReformulationType(std::string_view name) {
  for (const auto& [value, known] : kReformulationNames) {
    if (known == name) return value;
  }
  throw ValidationError("unknown reformulation type '" + std::string(name) +
                        "'");
}

std::size_t QueryGroup::NumPositives() const {
  return static_cast<std::size_t>(
      std::count_if(candidates.begin(), candidates.end(),
                    [](const Candidate& c) { return c.label == 1; }));
}

std::size_t Dataset::NumCandidates() const {
  std::size_t total = 0;
  for (const auto& group : groups) total += group.candidates.size();
  return total;
}

std::size_t Dataset::NumGroupsWithoutPositive() const {
  return static_cast<std::size_t>(
      std::count_if(groups.begin(), groups.end(),
                    [](const QueryGroup& g) { return !g.HasPositive(); }));
}

DatasetFormat FormatFromPath(const std::filesystem::path& path) {
  return path.extension() == ".tsv" ? DatasetFormat::kTsv
                                    : DatasetFormat::kJsonl;
}

Dataset ParseDataset(std::istream& in, DatasetFormat format, Split split) {
  Dataset dataset;
  dataset.split = split;
  std::unordered_map<std::string, std::size_t> group_index;
  std::set<std::pair<std::string, std::string>> seen;

  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (IsBlank(text)) continue;
    FlatRecord record = format == DatasetFormat::kJsonl
                            ? ParseJsonRecord(line, text)
                            : ParseTsvRecord(line, text);
    if (!seen.emplace(record.query_id, record.doc_id).second) {
      throw ValidationError("line " + std::to_string(line) +
                            ": duplicate (query_id, doc_id) = (" +
                            record.query_id + ", " + record.doc_id + ")");
    }
    auto [it, inserted] =
        group_index.emplace(record.query_id, dataset.groups.size());
    if (inserted) {
      QueryGroup group;
      group.query_id = record.query_id;
      group.query_text = record.query;
      dataset.groups.push_back(std::move(group));
    }
    QueryGroup& group = dataset.groups[it->second];
    if (group.query_text != record.query) {
      throw ValidationError("line " + std::to_string(line) +
                            ": query text differs from earlier records of "
                            "query_id " + record.query_id);
    }
    group.candidates.push_back(
        {std::move(record.doc_id), std::move(record.doc), record.label});
  }
  if (dataset.groups.empty()) throw ValidationError("no records");
  return dataset;
}

Dataset LoadDataset(const std::filesystem::path& path, DatasetFormat format,
                    Split split) {
  std::ifstream in = OpenOrThrow(path);
  return ParseDataset(in, format, split);
}

Dataset LoadDataset(const std::filesystem::path& path, Split split) {
  return LoadDataset(path, FormatFromPath(path), split);
}

void WriteJsonl(const Dataset& dataset, std::ostream& out) {
  for (const auto& group : dataset.groups) {
    for (const auto& candidate : group.candidates) {
      json record = json::object();
      record["query_id"] = group.query_id;
      record["query"] = group.query_text;
      record["doc_id"] = candidate.doc_id;
      record["doc"] = candidate.text;
      record["label"] = candidate.label;
      out << record.dump() << '\n';
    }
  }
}

void SaveJsonl(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  WriteJsonl(dataset, out);
}

std::vector<Reformulation> ParseReformulations(std::istream& in) {
  std::vector<Reformulation> out;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (IsBlank(text)) continue;
    json record;
    try {
      record = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(line, std::string("invalid json: ") + e.what());
    }
    if (!record.is_object()) throw ParseError(line, "record is not an object");
    Reformulation entry;
    entry.query_id = RequireString(line, record, "query_id");
    entry.type = ParseReformulationType(RequireString(line, record, "type"));
    entry.text = RequireString(line, record, "text");
    out.push_back(std::move(entry));
  }
  return out;
}

std::vector<Reformulation> LoadReformulations(
    const std::filesystem::path& path) {
  std::ifstream in = OpenOrThrow(path);
  return ParseReformulations(in);
}

Dataset MergeAugmentation(const Dataset& dataset,
                          const std::vector<Reformulation>& reformulations,
                          AugmentMode mode) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < dataset.groups.size(); ++i) {
    index.emplace(dataset.groups[i].query_id, i);
  }
  // Per source group, reformulations in file order.
  std::vector<std::vector<const Reformulation*>> by_group(
      dataset.groups.size());
  for (const auto& entry : reformulations) {
    auto it = index.find(entry.query_id);
    if (it == index.end()) {
      throw ValidationError("reformulation references unknown query_id '" +
                            entry.query_id + "'");
    }
    by_group[it->second].push_back(&entry);
  }

  Dataset out;
  out.split = dataset.split;
  if (mode == AugmentMode::kAttach) {
    out.groups = dataset.groups;
    for (std::size_t i = 0; i < out.groups.size(); ++i) {
      for (const Reformulation* entry : by_group[i]) {
        out.groups[i].reformulations[entry->type].push_back(entry->text);
      }
    }
    return out;
  }

  out.groups.reserve(dataset.groups.size() + reformulations.size());
  for (std::size_t i = 0; i < dataset.groups.size(); ++i) {
    const QueryGroup& source = dataset.groups[i];
    out.groups.push_back(source);
    std::map<ReformulationType, int> per_type;
    for (const Reformulation* entry : by_group[i]) {
      QueryGroup clone;
      clone.query_id = source.query_id + "#" +
                       std::string(ReformulationTypeName(entry->type)) + "-" +
                       std::to_string(per_type[entry->type]++);
      if (index.count(clone.query_id)) {
        throw ValidationError("generated query_id collides with existing '" +
                              clone.query_id + "'");
      }
      clone.query_text = entry->text;
      clone.candidates = source.candidates;
      out.groups.push_back(std::move(clone));
    }
  }
  return out;
}

Dataset MergeAugmentation(const Dataset& dataset,
                          const std::filesystem::path& reformulations,
                          AugmentMode mode) {
  return MergeAugmentation(dataset, LoadReformulations(reformulations), mode);
}

std::pair<Dataset, Dataset> SplitHoldout(const Dataset& dataset,
                                         double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw InvalidArgument("holdout fraction must be in (0, 1)");
  }
  const std::size_t n = dataset.groups.size();
  if (n < 2) throw InvalidArgument("holdout split needs at least 2 groups");
  auto held = static_cast<std::size_t>(std::llround(fraction * n));
  held = std::clamp<std::size_t>(held, 1, n - 1);

  Rng rng(seed);
  std::vector<std::size_t> picked = rng.SampleWithoutReplacement(n, held);
  std::vector<bool> in_holdout(n, false);
  for (std::size_t i : picked) in_holdout[i] = true;

  std::pair<Dataset, Dataset> out;
  out.first.split = dataset.split;
  out.second.split = Split::kValidation;
  for (std::size_t i = 0; i < n; ++i) {
    (in_holdout[i] ? out.second : out.first).groups.push_back(
        dataset.groups[i]);
  }
  return out;
}

}  // namespace contrank
