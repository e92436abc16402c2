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

#ifndef CONTRANK_TOKENIZER_H_
#define CONTRANK_TOKENIZER_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "contrank/corpus.h"

namespace contrank {

using TokenId = std::int32_t;

// Lowercases ASCII letters, splits on whitespace and splits every ASCII
// punctuation character off as its own token. Non-ASCII bytes are kept as
// part of the surrounding word.
std::vector<std::string> TokenizeText(std::string_view text);

class Vocabulary {
 public:
  static constexpr TokenId kPad = 0;
  static constexpr TokenId kSep = 1;
  static constexpr TokenId kOov = 2;
  static constexpr std::string_view kPadToken = "[PAD]";
  static constexpr std::string_view kSepToken = "[SEP]";
  static constexpr std::string_view kOovToken = "[OOV]";

  // Special tokens only.
  Vocabulary();

  // Special tokens followed by every distinct corpus token in lexicographic
  // order. Covers query texts, candidate texts and attached reformulations.
  static Vocabulary Build(const Dataset& dataset);

  // Inverse of tokens(). The first three entries must be the special tokens.
  static Vocabulary FromTokens(std::vector<std::string> tokens);

  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  TokenId Lookup(std::string_view token) const;
  std::vector<TokenId> Encode(std::string_view text) const;

  bool operator==(const Vocabulary& other) const {
    return tokens_ == other.tokens_;
  }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> ids_;
};

}  // namespace contrank

#endif  // CONTRANK_TOKENIZER_H_
