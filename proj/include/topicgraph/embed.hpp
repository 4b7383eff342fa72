/*
 * Copyright 2026 The topicgraph Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "topicgraph/hwa.hpp"
#include "topicgraph/matrix.hpp"
#include "topicgraph/random.hpp"

namespace topicgraph {

/// Random-walk parameters. `p` is the return parameter, `q` the in-out
/// parameter; p = q = 1 gives weight-proportional (DeepWalk) walks.
struct WalkConfig {
  std::size_t num_walks = 64;
  std::size_t walk_length = 8;
  double p = 0.5;
  double q = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrainConfig {
  std::size_t dim = 32;
  std::size_t window = 10;
  std::size_t epochs = 100;
  std::size_t negative_samples = 5;
  double learning_rate = 0.025;
  double min_learning_rate = 1e-4;
  std::uint64_t seed = 0;

  void validate() const;
};

using Walk = std::vector<std::size_t>;

/// Probability of stepping from `current` to each of its out-arcs (in the
/// order of graph.out(current)). The arc weight is scaled by 1/p when the arc
/// returns to `previous`, by 1 when its target is adjacent to `previous` in
/// the undirected skeleton, and by 1/q otherwise. Without a previous node the
/// distribution is weight-proportional. Empty for sinks.
std::vector<double> transition_probabilities(const AgfGraph& graph, std::optional<std::size_t> previous,
                                             std::size_t current, double p, double q);

/// Draws the next node of a biased walk; nullopt at a sink.
std::optional<std::size_t> sample_next(const AgfGraph& graph, std::optional<std::size_t> previous,
                                       std::size_t current, double p, double q, Rng& rng);

/// `num_walks` rounds; each round starts one walk at every node, in node
/// order. Walk (round r, node v) draws from its own stream derived from
/// (seed, v, r). Walks stop early at sinks.
std::vector<Walk> generate_walks(const AgfGraph& graph, const WalkConfig& cfg);

/// Skip-gram with negative sampling over node walks. Every (center, context)
/// pair within `window` positions of the same walk is an example; negatives
/// are drawn in proportion to walk occurrence count^0.75.
class SkipGramTrainer {
 public:
  SkipGramTrainer(std::vector<Walk> walks, std::size_t num_nodes, TrainConfig cfg);

  /// One pass over all walks, single-threaded and deterministic.
  void train_epoch();
  std::size_t epochs_done() const noexcept { return epochs_done_; }

  /// Mean per-pair objective log s(u.v) + sum log s(-u.n) over `walks`,
  /// with negatives drawn from a stream seeded by `seed`.
  double objective(std::span<const Walk> walks, std::uint64_t seed) const;

  /// Center ("input") vectors, one row per node.
  Matrix embeddings() const;

 private:
  std::size_t sample_negative(Rng& rng) const;

  std::vector<Walk> walks_;
  TrainConfig cfg_;
  float* input_row(std::size_t v) { return input_.data() + v * cfg_.dim; }
  float* output_row(std::size_t v) { return output_.data() + v * cfg_.dim; }
  const float* input_row(std::size_t v) const { return input_.data() + v * cfg_.dim; }
  const float* output_row(std::size_t v) const { return output_.data() + v * cfg_.dim; }

  std::size_t num_nodes_ = 0;
  // Single precision, as in the reference word2vec trainer.
  std::vector<float> input_;
  std::vector<float> output_;
  // Alias table over walk-count^0.75.
  std::vector<double> noise_accept_;
  std::vector<std::size_t> noise_alias_;
  std::size_t pairs_per_epoch_ = 0;
  std::size_t epochs_done_ = 0;
  Rng rng_;
};

/// Trains `cfg.epochs` epochs. Throws CoverageError when a node in
/// [0, num_nodes) occurs in no walk.
Matrix train_skipgram(std::span<const Walk> walks, std::size_t num_nodes, const TrainConfig& cfg);

/// Throws DomainError for a zero vector or mismatched sizes.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

}  // namespace topicgraph
