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

#include "contrank/perturb.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "contrank/error.h"
#include "contrank/random.h"

namespace contrank {
namespace {

constexpr std::pair<const char*, const char*> kDefaultLexicon[] = {
    {"don't", "do not"},        {"doesn't", "does not"},
    {"didn't", "did not"},      {"isn't", "is not"},
    {"aren't", "are not"},      {"wasn't", "was not"},
    {"weren't", "were not"},    {"haven't", "have not"},
    {"hasn't", "has not"},      {"hadn't", "had not"},
    {"won't", "will not"},      {"wouldn't", "would not"},
    {"can't", "cannot"},        {"couldn't", "could not"},
    {"shouldn't", "should not"}, {"mustn't", "must not"},
    {"needn't", "need not"},    {"mightn't", "might not"},
    {"shan't", "shall not"},    {"i'm", "i am"},
    {"you're", "you are"},      {"we're", "we are"},
    {"they're", "they are"},    {"i've", "i have"},
    {"you've", "you have"},     {"we've", "we have"},
    {"they've", "they have"},   {"i'll", "i will"},
    {"you'll", "you will"},     {"we'll", "we will"},
    {"they'll", "they will"},   {"he'll", "he will"},
    {"she'll", "she will"},     {"i'd", "i would"},
    {"you'd", "you would"},     {"we'd", "we would"},
    {"they'd", "they would"},   {"it's", "it is"},
    {"that's", "that is"},      {"there's", "there is"},
    {"let's", "let us"},
};

std::string Lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    auto u = static_cast<unsigned char>(c);
    if (u < 0x80) c = static_cast<char>(std::tolower(u));
  }
  return out;
}

bool IsAsciiLetter(char c) {
  auto u = static_cast<unsigned char>(c);
  return u < 0x80 && std::isalpha(u);
}

bool IsAsciiSpace(char c) {
  auto u = static_cast<unsigned char>(c);
  return u < 0x80 && std::isspace(u);
}

struct Span {
  std::size_t begin;
  std::size_t end;
};

std::vector<Span> LetterRuns(std::string_view text) {
  std::vector<Span> runs;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!IsAsciiLetter(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && IsAsciiLetter(text[j])) ++j;
    runs.push_back({i, j});
    i = j;
  }
  return runs;
}

// Word-local indices i such that (i, i + 1) is an interior pair of distinct
// letters.
std::vector<std::size_t> SwapPositions(std::string_view text, Span word) {
  std::vector<std::size_t> out;
  const std::size_t len = word.end - word.begin;
  for (std::size_t i = 1; i + 2 < len; ++i) {
    if (text[word.begin + i] != text[word.begin + i + 1]) out.push_back(i);
  }
  return out;
}

// Whitespace-separated token with its trailing punctuation split off, so
// "doesn't?" matches the lexicon entry "doesn't".
struct WordToken {
  std::size_t begin;
  std::size_t end;
  std::size_t core_end;  // end of the matchable part
  std::string core;      // lowercased
};

std::vector<WordToken> WordTokens(std::string_view text) {
  std::vector<WordToken> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (IsAsciiSpace(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !IsAsciiSpace(text[j])) ++j;
    std::size_t core_end = j;
    while (core_end > i) {
      auto c = static_cast<unsigned char>(text[core_end - 1]);
      if (c < 0x80 && std::ispunct(c) && c != '\'') {
        --core_end;
      } else {
        break;
      }
    }
    tokens.push_back({i, j, core_end, Lower(text.substr(i, core_end - i))});
    i = j;
  }
  return tokens;
}

std::vector<std::string> SplitWords(std::string_view phrase) {
  std::istringstream in{std::string(phrase)};
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(std::move(w));
  return words;
}

std::string Replace(std::string_view text, std::size_t begin, std::size_t end,
                    std::string replacement) {
  const auto first = static_cast<unsigned char>(text[begin]);
  if (first < 0x80 && std::isupper(first) && !replacement.empty()) {
    replacement[0] = static_cast<char>(
        std::toupper(static_cast<unsigned char>(replacement[0])));
  }
  std::string out(text.substr(0, begin));
  out += replacement;
  out += text.substr(end);
  return out;
}

}  // namespace

std::string_view PerturbationTypeName(PerturbationType type) {
  switch (type) {
    case PerturbationType::kPunctuation:
      return "punctuation";
    case PerturbationType::kTypo:
      return "typo";
    case PerturbationType::kContraction:
      return "contraction";
  }
  return "punctuation";
}

PerturbationType ParsePerturbationType(std::string_view name) {
  for (PerturbationType type :
       {PerturbationType::kPunctuation, PerturbationType::kTypo,
        PerturbationType::kContraction}) {
    if (PerturbationTypeName(type) == name) return type;
  }
  throw InvalidArgument("unknown perturbation type '" + std::string(name) +
                        "'");
}

ContractionLexicon ContractionLexicon::Default() {
  ContractionLexicon lexicon;
  for (const auto& [contraction, expansion] : kDefaultLexicon) {
    lexicon.Add(contraction, expansion);
  }
  return lexicon;
}

ContractionLexicon ContractionLexicon::Parse(std::istream& in) {
  ContractionLexicon lexicon;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size()) {
      throw ParseError(number, "expected contraction<TAB>expansion");
    }
    lexicon.Add(line.substr(0, tab), line.substr(tab + 1));
  }
  return lexicon;
}

ContractionLexicon ContractionLexicon::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return Parse(in);
}

void ContractionLexicon::Add(std::string contraction, std::string expansion) {
  contraction = Lower(contraction);
  // Normalize the expansion to single spaces.
  std::string normalized;
  for (const auto& word : SplitWords(Lower(expansion))) {
    if (!normalized.empty()) normalized += ' ';
    normalized += word;
  }
  if (contraction.empty() || normalized.empty() ||
      SplitWords(contraction).size() != 1) {
    throw ValidationError("invalid lexicon entry '" + contraction + "'");
  }
  auto e = expand_.find(contraction);
  auto c = contract_.find(normalized);
  if (e != expand_.end() || c != contract_.end()) {
    if (e != expand_.end() && e->second == normalized) return;
    throw ValidationError("lexicon entry '" + contraction + "' <-> '" +
                          normalized + "' conflicts with an existing entry");
  }
  expand_.emplace(contraction, normalized);
  contract_.emplace(normalized, contraction);
  entries_.emplace_back(contraction, normalized);
}

std::optional<std::string> ContractionLexicon::Expand(
    std::string_view contraction) const {
  auto it = expand_.find(contraction);
  if (it == expand_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> ContractionLexicon::Contract(
    std::string_view expansion) const {
  auto it = contract_.find(expansion);
  if (it == contract_.end()) return std::nullopt;
  return it->second;
}

std::string PerturbPunctuation(std::string_view query) {
  std::size_t end = query.size();
  while (end > 0 && IsAsciiSpace(query[end - 1])) --end;
  std::string out(query);
  if (end > 0 && (query[end - 1] == '?' || query[end - 1] == '.' ||
                  query[end - 1] == '!')) {
    out.erase(end - 1, 1);
  } else {
    out.insert(end, 1, '?');
  }
  return out;
}

std::string PerturbTypoAt(std::string_view query, std::size_t word,
                          std::size_t index) {
  const std::vector<Span> runs = LetterRuns(query);
  if (word >= runs.size()) throw InvalidArgument("word index out of range");
  const std::size_t len = runs[word].end - runs[word].begin;
  if (index < 1 || index + 2 >= len) {
    throw InvalidArgument("typo swap must use two interior letters");
  }
  std::string out(query);
  std::swap(out[runs[word].begin + index], out[runs[word].begin + index + 1]);
  return out;
}

PerturbResult PerturbTypo(std::string_view query, std::uint64_t seed) {
  struct Choice {
    std::size_t word;
    std::vector<std::size_t> positions;
  };
  std::vector<Choice> eligible;
  const std::vector<Span> runs = LetterRuns(query);
  for (std::size_t w = 0; w < runs.size(); ++w) {
    std::vector<std::size_t> positions = SwapPositions(query, runs[w]);
    if (!positions.empty()) eligible.push_back({w, std::move(positions)});
  }
  if (eligible.empty()) return {std::string(query), true};
  Rng rng(MixSeed({seed, StableHash(query)}));
  const Choice& choice = eligible[rng.UniformIndex(eligible.size())];
  const std::size_t index =
      choice.positions[rng.UniformIndex(choice.positions.size())];
  return {PerturbTypoAt(query, choice.word, index), false};
}

PerturbResult PerturbContraction(std::string_view query,
                                 const ContractionLexicon& lexicon) {
  const std::vector<WordToken> tokens = WordTokens(query);
  for (const WordToken& token : tokens) {
    if (auto expansion = lexicon.Expand(token.core)) {
      return {Replace(query, token.begin, token.core_end, *expansion), false};
    }
  }
  // Longest expansion phrase first at each position, then lexicon order.
  std::vector<std::pair<std::vector<std::string>, const std::string*>>
      phrases;
  for (const auto& [contraction, expansion] : lexicon.entries()) {
    phrases.emplace_back(SplitWords(expansion), &contraction);
  }
  std::stable_sort(phrases.begin(), phrases.end(),
                   [](const auto& a, const auto& b) {
                     return a.first.size() > b.first.size();
                   });
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    for (const auto& [words, contraction] : phrases) {
      if (i + words.size() > tokens.size()) continue;
      bool match = true;
      for (std::size_t k = 0; k < words.size() && match; ++k) {
        const WordToken& t = tokens[i + k];
        // Only the last word of the phrase may carry trailing punctuation.
        const bool clean = k + 1 == words.size() || t.core_end == t.end;
        match = clean && t.core == words[k];
      }
      if (match) {
        return {Replace(query, tokens[i].begin,
                        tokens[i + words.size() - 1].core_end, *contraction),
                false};
      }
    }
  }
  return {std::string(query), true};
}

std::map<PerturbationType, PerturbedSet> GenerateSuite(
    const Dataset& dataset, const std::vector<PerturbationSpec>& specs,
    const ContractionLexicon& lexicon) {
  std::map<PerturbationType, PerturbedSet> suite;
  for (const PerturbationSpec& spec : specs) {
    if (suite.count(spec.type)) {
      throw ValidationError("duplicate perturbation type '" +
                            std::string(PerturbationTypeName(spec.type)) +
                            "'");
    }
    PerturbedSet& entry = suite[spec.type];
    entry.dataset = dataset;
    for (QueryGroup& group : entry.dataset.groups) {
      PerturbResult result;
      switch (spec.type) {
        case PerturbationType::kPunctuation:
          result = {PerturbPunctuation(group.query_text), false};
          break;
        case PerturbationType::kTypo:
          result = PerturbTypo(group.query_text,
                               MixSeed({spec.seed,
                                        StableHash(group.query_id)}));
          break;
        case PerturbationType::kContraction:
          result = PerturbContraction(group.query_text, lexicon);
          break;
      }
      if (result.skipped) ++entry.skipped;
      group.query_text = std::move(result.text);
      group.reformulations.clear();
    }
  }
  return suite;
}

}  // namespace contrank
