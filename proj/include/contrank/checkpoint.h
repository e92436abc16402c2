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

#ifndef CONTRANK_CHECKPOINT_H_
#define CONTRANK_CHECKPOINT_H_

#include <filesystem>
#include <iosfwd>

#include "contrank/encoder.h"
#include "contrank/tokenizer.h"

namespace contrank {

// A trained ranker: vocabulary plus encoder/scorer parameters.
struct Checkpoint {
  Vocabulary vocabulary;
  EncoderParams params;

  // Throws ValidationError when the vocabulary size disagrees with the
  // embedding table.
  void Validate() const;
};

// Versioned json document:
//   {"format": "contrank-checkpoint", "version": 1,
//    "config": {"vocab_size", "embed_dim", "hidden_dim", "output_dim",
//               "max_len", "init_scale", "seed"},
//    "vocabulary": [token, ...], "params": [double, ...]}
// Doubles are written in shortest round-trip form, so Save/Load is exact.
void WriteCheckpoint(const Checkpoint& checkpoint, std::ostream& out);
Checkpoint ReadCheckpoint(std::istream& in);
void SaveCheckpoint(const Checkpoint& checkpoint,
                    const std::filesystem::path& path);
Checkpoint LoadCheckpoint(const std::filesystem::path& path);

}  // namespace contrank

#endif  // CONTRANK_CHECKPOINT_H_
