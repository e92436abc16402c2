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

#ifndef CONTRANK_CORPUS_H_
#define CONTRANK_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace contrank {

struct Candidate {
  std::string doc_id;
  std::string text;
  int label = 0;  // binary relevance

  bool operator==(const Candidate&) const = default;
};

enum class ReformulationType {
  kHeadline,
  kParaphrase,
  kVoice,
  kPunctuation,
  kTypo,
  kContraction,
};

std::string_view ReformulationTypeName(ReformulationType type);
// Throws ValidationError on an unknown name.
ReformulationType ParseReformulationType(std::string_view name);

struct QueryGroup {
  std::string query_id;
  std::string query_text;
  std::vector<Candidate> candidates;
  // Externally generated rewrites of query_text, stored by merge in attach
  // mode. Not part of the flat dataset file format.
  std::map<ReformulationType, std::vector<std::string>> reformulations;

  std::size_t NumPositives() const;
  // Groups without a positive are kept but excluded from evaluation.
  bool HasPositive() const { return NumPositives() > 0; }
  bool HasNegative() const { return NumPositives() < candidates.size(); }

  bool operator==(const QueryGroup&) const = default;
};

enum class Split { kTrain, kValidation, kTest };

struct Dataset {
  Split split = Split::kTrain;
  std::vector<QueryGroup> groups;

  std::size_t NumCandidates() const;
  std::size_t NumGroupsWithoutPositive() const;

  bool operator==(const Dataset&) const = default;
};

enum class DatasetFormat { kJsonl, kTsv };

// Picks the format from the file extension: ".tsv" is tsv, anything else jsonl.
DatasetFormat FormatFromPath(const std::filesystem::path& path);

// Reads one flat record per (query, candidate) pair and groups records by
// query_id, preserving first-appearance order of queries and read order of
// candidates.
//
// jsonl records: {"query_id","query","doc_id","doc","label"}.
// tsv columns:   query_id, query, doc_id, doc, label (no quoting).
//
// Throws ParseError (with line number) on malformed records and
// ValidationError on duplicate (query_id, doc_id) or an empty input.
Dataset ParseDataset(std::istream& in, DatasetFormat format,
                     Split split = Split::kTrain);
Dataset LoadDataset(const std::filesystem::path& path, DatasetFormat format,
                    Split split = Split::kTrain);
Dataset LoadDataset(const std::filesystem::path& path,
                    Split split = Split::kTrain);

// Writes the flat jsonl form read by ParseDataset. Reformulations are not
// serialized.
void WriteJsonl(const Dataset& dataset, std::ostream& out);
void SaveJsonl(const Dataset& dataset, const std::filesystem::path& path);

struct Reformulation {
  std::string query_id;
  ReformulationType type;
  std::string text;
};

// Reads jsonl records {"query_id","type","text"}. An empty file is valid.
std::vector<Reformulation> ParseReformulations(std::istream& in);
std::vector<Reformulation> LoadReformulations(
    const std::filesystem::path& path);

enum class AugmentMode {
  // One extra group per reformulation, with the rewritten query text and a
  // fresh query_id "<query_id>#<type>-<k>", inserted right after its source.
  kExpand,
  // Reformulations stored inside the source group.
  kAttach,
};

// Throws ValidationError on an unknown query_id or reformulation type.
Dataset MergeAugmentation(const Dataset& dataset,
                          const std::vector<Reformulation>& reformulations,
                          AugmentMode mode);
Dataset MergeAugmentation(const Dataset& dataset,
                          const std::filesystem::path& reformulations,
                          AugmentMode mode);

// Seeded partition at group granularity. Returns (kept, held_out) where
// held_out has round(fraction * n) groups clamped to [1, n - 1]. Both parts
// keep the input order of their groups.
std::pair<Dataset, Dataset> SplitHoldout(const Dataset& dataset,
                                         double fraction, std::uint64_t seed);

}  // namespace contrank

#endif  // CONTRANK_CORPUS_H_
