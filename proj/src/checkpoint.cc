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

#include "contrank/checkpoint.h"

#include <fstream>

#include "contrank/error.h"
#include "json.hpp"

namespace contrank {
namespace {

using nlohmann::json;

constexpr const char* kFormat = "contrank-checkpoint";
constexpr int kVersion = 1;

}  // namespace

void Checkpoint::Validate() const {
  if (static_cast<int>(vocabulary.size()) != params.config().vocab_size) {
    throw ValidationError(
        "vocabulary mismatch: checkpoint vocabulary has " +
        std::to_string(vocabulary.size()) + " tokens but encoder expects " +
        std::to_string(params.config().vocab_size));
  }
}

void WriteCheckpoint(const Checkpoint& checkpoint, std::ostream& out) {
  checkpoint.Validate();
  const EncoderConfig& config = checkpoint.params.config();
  json doc;
  doc["format"] = kFormat;
  doc["version"] = kVersion;
  doc["config"] = {{"vocab_size", config.vocab_size},
                   {"embed_dim", config.embed_dim},
                   {"hidden_dim", config.hidden_dim},
                   {"output_dim", config.output_dim},
                   {"max_len", config.max_len},
                   {"init_scale", config.init_scale},
                   {"seed", config.seed}};
  doc["vocabulary"] = checkpoint.vocabulary.tokens();
  const auto values = checkpoint.params.values();
  doc["params"] = std::vector<double>(values.begin(), values.end());
  out << doc.dump() << '\n';
}

Checkpoint ReadCheckpoint(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
    if (doc.at("format") != kFormat) {
      throw ValidationError("not a contrank checkpoint");
    }
    if (doc.at("version") != kVersion) {
      throw ValidationError("unsupported checkpoint version " +
                            doc.at("version").dump());
    }
    const json& c = doc.at("config");
    EncoderConfig config;
    config.vocab_size = c.at("vocab_size").get<int>();
    config.embed_dim = c.at("embed_dim").get<int>();
    config.hidden_dim = c.at("hidden_dim").get<int>();
    config.output_dim = c.at("output_dim").get<int>();
    config.max_len = c.at("max_len").get<int>();
    config.init_scale = c.at("init_scale").get<double>();
    config.seed = c.at("seed").get<std::uint64_t>();

    Checkpoint checkpoint{
        Vocabulary::FromTokens(
            doc.at("vocabulary").get<std::vector<std::string>>()),
        EncoderParams(config)};
    checkpoint.Validate();
    const auto values = doc.at("params").get<std::vector<double>>();
    auto target = checkpoint.params.values();
    if (values.size() != target.size()) {
      throw ValidationError("checkpoint has " + std::to_string(values.size()) +
                            " parameters, expected " +
                            std::to_string(target.size()));
    }
    std::copy(values.begin(), values.end(), target.begin());
    return checkpoint;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed checkpoint: ") + e.what());
  }
}

void SaveCheckpoint(const Checkpoint& checkpoint,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  WriteCheckpoint(checkpoint, out);
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return ReadCheckpoint(in);
}

}  // namespace contrank
