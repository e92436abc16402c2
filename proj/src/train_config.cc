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

#include "contrank/train_config.h"

#include <fstream>
#include <set>
#include <sstream>

#include "contrank/error.h"
#include "json.hpp"

namespace contrank {
namespace {

using nlohmann::json;

void RejectUnknown(const json& object, const std::set<std::string>& known,
                   const std::string& where) {
  if (!object.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : object.items()) {
    if (!known.count(key)) {
      throw ConfigError("unknown config key '" + where + key + "'");
    }
  }
}

template <typename T>
void Read(const json& object, const char* key, T& out) {
  auto it = object.find(key);
  if (it == object.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key +
                      "' has the wrong type");
  }
}

std::string_view OptimizerName(OptimizerType type) {
  return type == OptimizerType::kSgd ? "sgd" : "adam";
}

std::string_view ReductionName(ContrastiveReduction reduction) {
  return reduction == ContrastiveReduction::kSum ? "sum" : "mean";
}

}  // namespace

bool TrainConfig::ContrastiveActive() const {
  return contrastive && (loss.dwa_enabled || loss.w2 > 0.0);
}

void TrainConfig::Validate() const {
  loss.Validate();
  batch.Validate();
  miner.Validate();
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
  if (max_epochs < 1) throw ConfigError("max_epochs must be >= 1");
  if (grad_accumulation_steps < 1) {
    throw ConfigError("grad_accumulation_steps must be >= 1");
  }
  if (early_stop_patience < 0) {
    throw ConfigError("early_stop_patience must be >= 0");
  }
  encoder.Validate();
}

TrainConfig ParseTrainConfig(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid json: ") + e.what());
  }
  RejectUnknown(doc,
                {"loss", "batch", "miner", "encoder", "contrastive",
                 "contrastive_reduction", "optimizer", "learning_rate",
                 "max_epochs", "grad_accumulation_steps",
                 "early_stop_patience", "seed"},
                "");
  TrainConfig config;
  Read(doc, "seed", config.seed);
  config.batch.seed = config.seed;

  if (auto it = doc.find("loss"); it != doc.end()) {
    RejectUnknown(*it,
                  {"hinge_margin", "triplet_margin", "w1", "w2", "dwa_enabled",
                   "dwa_period"},
                  "loss.");
    Read(*it, "hinge_margin", config.loss.hinge_margin);
    Read(*it, "triplet_margin", config.loss.triplet_margin);
    Read(*it, "w1", config.loss.w1);
    Read(*it, "w2", config.loss.w2);
    Read(*it, "dwa_enabled", config.loss.dwa_enabled);
    Read(*it, "dwa_period", config.loss.dwa_period);
  }
  if (auto it = doc.find("batch"); it != doc.end()) {
    RejectUnknown(*it,
                  {"regime", "positives_per_batch", "negatives_per_query",
                   "similarity", "seed"},
                  "batch.");
    std::string regime(BatchRegimeName(config.batch.regime));
    std::string similarity(SimilarityName(config.batch.similarity));
    Read(*it, "regime", regime);
    Read(*it, "similarity", similarity);
    config.batch.regime = ParseBatchRegime(regime);
    config.batch.similarity = ParseSimilarity(similarity);
    Read(*it, "positives_per_batch", config.batch.positives_per_batch);
    Read(*it, "negatives_per_query", config.batch.negatives_per_query);
    Read(*it, "seed", config.batch.seed);
  }
  if (auto it = doc.find("miner"); it != doc.end()) {
    RejectUnknown(*it, {"type", "angle_threshold", "margin", "max_triplets"},
                  "miner.");
    std::string type(MinerTypeName(config.miner.type));
    Read(*it, "type", type);
    config.miner.type = ParseMinerType(type);
    Read(*it, "angle_threshold", config.miner.angle_threshold);
    Read(*it, "margin", config.miner.margin);
    Read(*it, "max_triplets", config.miner.max_triplets);
  }
  if (auto it = doc.find("encoder"); it != doc.end()) {
    RejectUnknown(*it,
                  {"embed_dim", "hidden_dim", "output_dim", "max_len",
                   "init_scale"},
                  "encoder.");
    Read(*it, "embed_dim", config.encoder.embed_dim);
    Read(*it, "hidden_dim", config.encoder.hidden_dim);
    Read(*it, "output_dim", config.encoder.output_dim);
    Read(*it, "max_len", config.encoder.max_len);
    Read(*it, "init_scale", config.encoder.init_scale);
  }
  config.contrastive = config.batch.regime == BatchRegime::kContrastive;
  Read(doc, "contrastive", config.contrastive);

  std::string reduction(ReductionName(config.contrastive_reduction));
  Read(doc, "contrastive_reduction", reduction);
  if (reduction == "mean") {
    config.contrastive_reduction = ContrastiveReduction::kMean;
  } else if (reduction == "sum") {
    config.contrastive_reduction = ContrastiveReduction::kSum;
  } else {
    throw ConfigError("contrastive_reduction must be 'mean' or 'sum'");
  }
  std::string optimizer(OptimizerName(config.optimizer));
  Read(doc, "optimizer", optimizer);
  if (optimizer == "adam") {
    config.optimizer = OptimizerType::kAdam;
  } else if (optimizer == "sgd") {
    config.optimizer = OptimizerType::kSgd;
  } else {
    throw ConfigError("optimizer must be 'adam' or 'sgd'");
  }
  Read(doc, "learning_rate", config.learning_rate);
  Read(doc, "max_epochs", config.max_epochs);
  Read(doc, "grad_accumulation_steps", config.grad_accumulation_steps);
  Read(doc, "early_stop_patience", config.early_stop_patience);
  config.encoder.seed = config.seed;
  config.Validate();
  return config;
}

TrainConfig LoadTrainConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseTrainConfig(buffer.str());
}

std::string TrainConfigToJson(const TrainConfig& config) {
  nlohmann::ordered_json doc;
  doc["loss"] = {{"hinge_margin", config.loss.hinge_margin},
                 {"triplet_margin", config.loss.triplet_margin},
                 {"w1", config.loss.w1},
                 {"w2", config.loss.w2},
                 {"dwa_enabled", config.loss.dwa_enabled},
                 {"dwa_period", config.loss.dwa_period}};
  doc["batch"] = {{"regime", BatchRegimeName(config.batch.regime)},
                  {"positives_per_batch", config.batch.positives_per_batch},
                  {"negatives_per_query", config.batch.negatives_per_query},
                  {"similarity", SimilarityName(config.batch.similarity)},
                  {"seed", config.batch.seed}};
  doc["miner"] = {{"type", MinerTypeName(config.miner.type)},
                  {"angle_threshold", config.miner.angle_threshold},
                  {"margin", config.miner.margin},
                  {"max_triplets", config.miner.max_triplets}};
  doc["encoder"] = {{"embed_dim", config.encoder.embed_dim},
                    {"hidden_dim", config.encoder.hidden_dim},
                    {"output_dim", config.encoder.output_dim},
                    {"max_len", config.encoder.max_len},
                    {"init_scale", config.encoder.init_scale}};
  doc["contrastive"] = config.contrastive;
  doc["contrastive_reduction"] = ReductionName(config.contrastive_reduction);
  doc["optimizer"] = OptimizerName(config.optimizer);
  doc["learning_rate"] = config.learning_rate;
  doc["max_epochs"] = config.max_epochs;
  doc["grad_accumulation_steps"] = config.grad_accumulation_steps;
  doc["early_stop_patience"] = config.early_stop_patience;
  doc["seed"] = config.seed;
  return doc.dump(2);
}

}  // namespace contrank
