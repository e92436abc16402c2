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

#include "contrank/tokenizer.h"

#include <algorithm>
#include <cctype>
#include <set>

#include "contrank/error.h"

namespace contrank {
namespace {

bool IsAsciiSpace(unsigned char c) { return c < 0x80 && std::isspace(c); }
bool IsAsciiPunct(unsigned char c) { return c < 0x80 && std::ispunct(c); }

}  // namespace

std::vector<std::string> TokenizeText(std::string_view text) {
  std::vector<std::string> tokens;
  std::string word;
  auto flush = [&] {
    if (!word.empty()) tokens.push_back(std::move(word));
    word.clear();
  };
  for (char raw : text) {
    auto c = static_cast<unsigned char>(raw);
    if (IsAsciiSpace(c)) {
      flush();
    } else if (IsAsciiPunct(c)) {
      flush();
      tokens.emplace_back(1, raw);
    } else {
      word.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : raw);
    }
  }
  flush();
  return tokens;
}

Vocabulary::Vocabulary()
    : tokens_{std::string(kPadToken), std::string(kSepToken),
              std::string(kOovToken)} {
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    ids_.emplace(tokens_[i], static_cast<TokenId>(i));
  }
}

Vocabulary Vocabulary::Build(const Dataset& dataset) {
  std::set<std::string> distinct;
  auto add = [&](std::string_view text) {
    for (auto& token : TokenizeText(text)) distinct.insert(std::move(token));
  };
  for (const auto& group : dataset.groups) {
    add(group.query_text);
    for (const auto& candidate : group.candidates) add(candidate.text);
    for (const auto& [type, texts] : group.reformulations) {
      for (const auto& text : texts) add(text);
    }
  }
  std::vector<std::string> tokens = {std::string(kPadToken),
                                     std::string(kSepToken),
                                     std::string(kOovToken)};
  for (const auto& token : distinct) {
    if (token != kPadToken && token != kSepToken && token != kOovToken) {
      tokens.push_back(token);
    }
  }
  return FromTokens(std::move(tokens));
}

Vocabulary Vocabulary::FromTokens(std::vector<std::string> tokens) {
  if (tokens.size() < 3 || tokens[kPad] != kPadToken ||
      tokens[kSep] != kSepToken || tokens[kOov] != kOovToken) {
    throw ValidationError("vocabulary must start with [PAD], [SEP], [OOV]");
  }
  Vocabulary vocab;
  vocab.ids_.clear();
  vocab.tokens_ = std::move(tokens);
  for (std::size_t i = 0; i < vocab.tokens_.size(); ++i) {
    if (!vocab.ids_.emplace(vocab.tokens_[i], static_cast<TokenId>(i))
             .second) {
      throw ValidationError("duplicate vocabulary token '" + vocab.tokens_[i] +
                            "'");
    }
  }
  return vocab;
}

TokenId Vocabulary::Lookup(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  return it == ids_.end() ? kOov : it->second;
}

std::vector<TokenId> Vocabulary::Encode(std::string_view text) const {
  std::vector<TokenId> ids;
  for (const auto& token : TokenizeText(text)) ids.push_back(Lookup(token));
  return ids;
}

}  // namespace contrank
