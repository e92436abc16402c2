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

#ifndef CONTRANK_BATCHING_H_
#define CONTRANK_BATCHING_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "contrank/corpus.h"
#include "contrank/mining.h"
#include "contrank/random.h"

namespace contrank {

enum class BatchRegime { kShl, kMhl, kContrastive };
enum class Similarity { kRelevanceLabel, kReformulation };

std::string_view BatchRegimeName(BatchRegime regime);
BatchRegime ParseBatchRegime(std::string_view name);
std::string_view SimilarityName(Similarity similarity);
Similarity ParseSimilarity(std::string_view name);

struct BatchSpec {
  BatchRegime regime = BatchRegime::kContrastive;
  int positives_per_batch = 16;
  int negatives_per_query = 15;
  Similarity similarity = Similarity::kRelevanceLabel;
  std::uint64_t seed = 0;

  // Throws ConfigError. A contrastive batch with a single positive under the
  // relevance-label notion of similarity has no valid triplet and is
  // rejected.
  void Validate() const;
};

struct BatchPair {
  std::string query_id;    // source group, also for reformulated queries
  std::string doc_id;
  int label = 0;
  std::string query_text;  // the reformulation text for reformulation pairs
  std::string doc_text;
  bool reformulated = false;

  bool operator==(const BatchPair&) const = default;
};

// One positive and its negatives from the same query, as indices into
// Batch::pairs.
struct RankingBlock {
  std::size_t positive = 0;
  std::vector<std::size_t> negatives;

  bool operator==(const RankingBlock&) const = default;
};

struct Batch {
  std::vector<BatchPair> pairs;
  BatchLabels labels;  // similarity class per pair
  std::vector<RankingBlock> ranking_blocks;

  bool operator==(const Batch&) const = default;
};

// Position inside an epoch. (spec.seed, epoch, position) determines a batch.
struct BatchCursor {
  int epoch = 0;
  std::size_t position = 0;
};

// Builds batches for one dataset. Eligible groups (at least one positive and
// one negative) are visited once per epoch in a seeded order reshuffled each
// epoch. Randomness inside a batch is derived from (seed, epoch, position),
// so a batch can be rebuilt from its cursor alone.
class BatchBuilder {
 public:
  // Keeps a reference to `dataset`, which must outlive the builder.
  BatchBuilder(const Dataset& dataset, BatchSpec spec);

  const BatchSpec& spec() const { return spec_; }
  std::size_t num_eligible() const { return eligible_.size(); }
  // Groups lacking a positive or a negative.
  std::size_t num_skipped() const { return skipped_; }

  // Eligible group indices in visiting order for `epoch`.
  std::vector<std::size_t> EpochOrder(int epoch) const;

  // One positive and up to negatives_per_query negatives of the next group.
  // Advances the cursor by one group; nullopt at the end of the epoch.
  std::optional<Batch> BuildMhlBatch(BatchCursor& cursor) const;

  // An MHL block plus positives_per_batch - 1 extra "pos" members: positives
  // of other distinct queries (relevance-label similarity) or reformulations
  // of the block's query paired with its positive (reformulation similarity).
  // Extra queries are taken round-robin from a per-epoch shuffle of groups
  // with a positive. Advances the cursor by one group.
  std::optional<Batch> BuildContrastiveBatch(BatchCursor& cursor) const;

  // positives_per_batch (q, d+, d-) triplets from distinct queries, one
  // ranking block each. Advances the cursor by the number of triplets.
  std::optional<Batch> BuildShlTriplets(BatchCursor& cursor) const;

  // Dispatches on spec().regime.
  std::optional<Batch> Next(BatchCursor& cursor) const;

  // Number of shortened batches (fewer positives than requested) emitted.
  std::size_t num_short_batches() const { return short_batches_; }

 private:
  BatchPair MakePair(const QueryGroup& group, std::size_t candidate) const;
  std::size_t PickPositive(const QueryGroup& group, Rng& rng) const;
  std::vector<std::size_t> PickNegatives(const QueryGroup& group,
                                         std::size_t count, Rng& rng) const;
  const std::vector<std::size_t>& PositivePoolOrder(int epoch) const;
  const std::vector<std::size_t>& CachedEpochOrder(int epoch) const;

  const Dataset& dataset_;
  BatchSpec spec_;
  std::vector<std::size_t> eligible_;       // >= 1 positive and >= 1 negative
  std::vector<std::size_t> positive_pool_;  // >= 1 positive
  std::size_t skipped_ = 0;
  mutable std::size_t short_batches_ = 0;
  mutable int order_epoch_ = -1;
  mutable std::vector<std::size_t> order_;
  mutable int pool_epoch_ = -1;
  mutable std::vector<std::size_t> pool_order_;
};

}  // namespace contrank

#endif  // CONTRANK_BATCHING_H_
