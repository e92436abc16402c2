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

#ifndef CONTRANK_PERTURB_H_
#define CONTRANK_PERTURB_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "contrank/corpus.h"

namespace contrank {

enum class PerturbationType { kPunctuation, kTypo, kContraction };

std::string_view PerturbationTypeName(PerturbationType type);
// Throws InvalidArgument on an unknown name.
PerturbationType ParsePerturbationType(std::string_view name);

struct PerturbationSpec {
  PerturbationType type = PerturbationType::kPunctuation;
  std::uint64_t seed = 0;
};

struct PerturbResult {
  std::string text;
  bool skipped = false;  // no applicable edit; text is the input unchanged
};

// Bidirectional contraction <-> expansion map, lowercase on both sides.
class ContractionLexicon {
 public:
  // About forty common English contractions. Wh-word contractions ("what's")
  // are left out so ordinary questions are not rewritten.
  static ContractionLexicon Default();

  // tsv lines "contraction<TAB>expansion". Throws ValidationError if either
  // direction would map one key to two values.
  static ContractionLexicon Parse(std::istream& in);
  static ContractionLexicon Load(const std::filesystem::path& path);

  // Throws ValidationError on a conflicting entry.
  void Add(std::string contraction, std::string expansion);

  std::optional<std::string> Expand(std::string_view contraction) const;
  std::optional<std::string> Contract(std::string_view expansion) const;

  // In insertion order.
  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::map<std::string, std::string, std::less<>> expand_;
  std::map<std::string, std::string, std::less<>> contract_;
};

// Drops a trailing '?', '.' or '!' if present, otherwise appends '?'.
// Trailing whitespace is left where it is.
std::string PerturbPunctuation(std::string_view query);

// Swaps two adjacent interior letters of one word chosen from (query, seed).
// Words are runs of ASCII letters; a word is eligible when it has an interior
// adjacent pair of distinct letters, so the first and last letters never move
// and the edit is always visible.
PerturbResult PerturbTypo(std::string_view query, std::uint64_t seed);

// Deterministic form: swaps letters `index` and `index + 1` of the
// `word`-th letter run. Throws InvalidArgument unless both positions are
// interior.
std::string PerturbTypoAt(std::string_view query, std::size_t word,
                          std::size_t index);

// Expands the first token found in the lexicon; failing that, contracts the
// first matching expansion phrase. At most one substitution.
PerturbResult PerturbContraction(std::string_view query,
                                 const ContractionLexicon& lexicon);

struct PerturbedSet {
  Dataset dataset;
  std::size_t skipped = 0;  // queries left unchanged
};

// One rewritten copy of the dataset per spec; candidates are untouched.
// Throws ValidationError when two specs share a type.
std::map<PerturbationType, PerturbedSet> GenerateSuite(
    const Dataset& dataset, const std::vector<PerturbationSpec>& specs,
    const ContractionLexicon& lexicon = ContractionLexicon::Default());

}  // namespace contrank

#endif  // CONTRANK_PERTURB_H_
