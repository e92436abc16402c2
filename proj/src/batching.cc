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

#include "contrank/batching.h"

#include <algorithm>

#include "contrank/error.h"

namespace contrank {
namespace {

// Salts separating the independent random streams of one (seed, epoch).
constexpr std::uint64_t kOrderStream = 1;
constexpr std::uint64_t kPoolStream = 2;
constexpr std::uint64_t kBatchStream = 3;

}  // namespace

std::string_view BatchRegimeName(BatchRegime regime) {
  switch (regime) {
    case BatchRegime::kShl:
      return "shl";
    case BatchRegime::kMhl:
      return "mhl";
    case BatchRegime::kContrastive:
      return "contrastive";
  }
  return "mhl";
}

BatchRegime ParseBatchRegime(std::string_view name) {
  for (BatchRegime regime :
       {BatchRegime::kShl, BatchRegime::kMhl, BatchRegime::kContrastive}) {
    if (BatchRegimeName(regime) == name) return regime;
  }
  throw ConfigError("unknown batch regime '" + std::string(name) + "'");
}

std::string_view SimilarityName(Similarity similarity) {
  return similarity == Similarity::kReformulation ? "reformulation"
                                                  : "relevance_label";
}

Similarity ParseSimilarity(std::string_view name) {
  if (name == "relevance_label") return Similarity::kRelevanceLabel;
  if (name == "reformulation") return Similarity::kReformulation;
  throw ConfigError("unknown similarity '" + std::string(name) + "'");
}

void BatchSpec::Validate() const {
  if (positives_per_batch < 1) {
    throw ConfigError("positives_per_batch must be >= 1");
  }
  if (negatives_per_query < 1) {
    throw ConfigError("negatives_per_query must be >= 1");
  }
  if (regime == BatchRegime::kContrastive && positives_per_batch < 2 &&
      similarity == Similarity::kRelevanceLabel) {
    throw ConfigError(
        "contrastive batches with relevance-label similarity need "
        "positives_per_batch >= 2");
  }
}

BatchBuilder::BatchBuilder(const Dataset& dataset, BatchSpec spec)
    : dataset_(dataset), spec_(spec) {
  spec_.Validate();
  for (std::size_t i = 0; i < dataset_.groups.size(); ++i) {
    const QueryGroup& group = dataset_.groups[i];
    if (group.HasPositive()) positive_pool_.push_back(i);
    if (group.HasPositive() && group.HasNegative()) {
      eligible_.push_back(i);
    } else {
      ++skipped_;
    }
  }
}

std::vector<std::size_t> BatchBuilder::EpochOrder(int epoch) const {
  std::vector<std::size_t> order = eligible_;
  Rng rng(MixSeed({spec_.seed, static_cast<std::uint64_t>(epoch),
                   kOrderStream}));
  rng.Shuffle(order);
  return order;
}

const std::vector<std::size_t>& BatchBuilder::CachedEpochOrder(
    int epoch) const {
  if (order_epoch_ != epoch) {
    order_ = EpochOrder(epoch);
    order_epoch_ = epoch;
  }
  return order_;
}

const std::vector<std::size_t>& BatchBuilder::PositivePoolOrder(
    int epoch) const {
  if (pool_epoch_ != epoch) {
    pool_order_ = positive_pool_;
    Rng rng(MixSeed({spec_.seed, static_cast<std::uint64_t>(epoch),
                     kPoolStream}));
    rng.Shuffle(pool_order_);
    pool_epoch_ = epoch;
  }
  return pool_order_;
}

BatchPair BatchBuilder::MakePair(const QueryGroup& group,
                                 std::size_t candidate) const {
  const Candidate& c = group.candidates[candidate];
  return {group.query_id, c.doc_id, c.label, group.query_text, c.text, false};
}

std::size_t BatchBuilder::PickPositive(const QueryGroup& group,
                                       Rng& rng) const {
  std::vector<std::size_t> positives;
  for (std::size_t i = 0; i < group.candidates.size(); ++i) {
    if (group.candidates[i].label == 1) positives.push_back(i);
  }
  if (positives.size() == 1) return positives.front();
  return positives[rng.UniformIndex(positives.size())];
}

std::vector<std::size_t> BatchBuilder::PickNegatives(const QueryGroup& group,
                                                     std::size_t count,
                                                     Rng& rng) const {
  std::vector<std::size_t> negatives;
  for (std::size_t i = 0; i < group.candidates.size(); ++i) {
    if (group.candidates[i].label == 0) negatives.push_back(i);
  }
  std::vector<std::size_t> picked;
  for (std::size_t k : rng.SampleWithoutReplacement(negatives.size(), count)) {
    picked.push_back(negatives[k]);
  }
  return picked;
}

std::optional<Batch> BatchBuilder::BuildMhlBatch(BatchCursor& cursor) const {
  const auto& order = CachedEpochOrder(cursor.epoch);
  if (cursor.position >= order.size()) return std::nullopt;
  Rng rng(MixSeed({spec_.seed, static_cast<std::uint64_t>(cursor.epoch),
                   cursor.position, kBatchStream}));
  const QueryGroup& group = dataset_.groups[order[cursor.position]];

  Batch batch;
  RankingBlock block;
  block.positive = 0;
  batch.pairs.push_back(MakePair(group, PickPositive(group, rng)));
  batch.labels.push_back(true);
  for (std::size_t neg : PickNegatives(
           group, static_cast<std::size_t>(spec_.negatives_per_query), rng)) {
    block.negatives.push_back(batch.pairs.size());
    batch.pairs.push_back(MakePair(group, neg));
    batch.labels.push_back(false);
  }
  batch.ranking_blocks.push_back(std::move(block));
  ++cursor.position;
  return batch;
}

std::optional<Batch> BatchBuilder::BuildContrastiveBatch(
    BatchCursor& cursor) const {
  const std::size_t primary_position = cursor.position;
  const int epoch = cursor.epoch;
  std::optional<Batch> batch = BuildMhlBatch(cursor);
  if (!batch) return batch;

  const std::size_t primary = CachedEpochOrder(epoch)[primary_position];
  const QueryGroup& group = dataset_.groups[primary];
  const auto wanted = static_cast<std::size_t>(spec_.positives_per_batch - 1);
  Rng rng(MixSeed({spec_.seed, static_cast<std::uint64_t>(epoch),
                   primary_position, kBatchStream, 1}));
  std::size_t added = 0;

  if (spec_.similarity == Similarity::kRelevanceLabel) {
    const auto& pool = PositivePoolOrder(epoch);
    const std::size_t start =
        pool.empty() ? 0 : (primary_position * wanted) % pool.size();
    for (std::size_t offset = 0; offset < pool.size() && added < wanted;
         ++offset) {
      const std::size_t other = pool[(start + offset) % pool.size()];
      if (other == primary) continue;
      const QueryGroup& extra = dataset_.groups[other];
      batch->pairs.push_back(MakePair(extra, PickPositive(extra, rng)));
      batch->labels.push_back(true);
      ++added;
    }
  } else {
    std::vector<const std::string*> rewrites;
    for (const auto& [type, texts] : group.reformulations) {
      for (const auto& text : texts) rewrites.push_back(&text);
    }
    std::vector<std::size_t> keep =
        rng.SampleWithoutReplacement(rewrites.size(), wanted);
    std::sort(keep.begin(), keep.end());
    const BatchPair& positive = batch->pairs.front();
    for (std::size_t k : keep) {
      BatchPair pair = positive;
      pair.query_text = *rewrites[k];
      pair.reformulated = true;
      batch->pairs.push_back(std::move(pair));
      batch->labels.push_back(true);
      ++added;
    }
  }
  if (added < wanted) ++short_batches_;
  return batch;
}

std::optional<Batch> BatchBuilder::BuildShlTriplets(BatchCursor& cursor) const {
  const auto& order = CachedEpochOrder(cursor.epoch);
  if (cursor.position >= order.size()) return std::nullopt;
  Rng rng(MixSeed({spec_.seed, static_cast<std::uint64_t>(cursor.epoch),
                   cursor.position, kBatchStream}));
  const std::size_t end = std::min(
      order.size(),
      cursor.position + static_cast<std::size_t>(spec_.positives_per_batch));

  Batch batch;
  for (std::size_t i = cursor.position; i < end; ++i) {
    const QueryGroup& group = dataset_.groups[order[i]];
    RankingBlock block;
    block.positive = batch.pairs.size();
    batch.pairs.push_back(MakePair(group, PickPositive(group, rng)));
    batch.labels.push_back(true);
    block.negatives.push_back(batch.pairs.size());
    batch.pairs.push_back(MakePair(group, PickNegatives(group, 1, rng)[0]));
    batch.labels.push_back(false);
    batch.ranking_blocks.push_back(std::move(block));
  }
  if (end - cursor.position <
      static_cast<std::size_t>(spec_.positives_per_batch)) {
    ++short_batches_;
  }
  cursor.position = end;
  return batch;
}

std::optional<Batch> BatchBuilder::Next(BatchCursor& cursor) const {
  switch (spec_.regime) {
    case BatchRegime::kShl:
      return BuildShlTriplets(cursor);
    case BatchRegime::kMhl:
      return BuildMhlBatch(cursor);
    case BatchRegime::kContrastive:
      return BuildContrastiveBatch(cursor);
  }
  return std::nullopt;
}

}  // namespace contrank
