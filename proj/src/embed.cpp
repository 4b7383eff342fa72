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


#include "topicgraph/embed.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "topicgraph/errors.hpp"

namespace topicgraph {

namespace {

double bias(const AgfGraph& graph, std::optional<std::size_t> previous, std::size_t next, double p, double q) {
  if (!previous) return 1.0;
  if (next == *previous) return 1.0 / p;
  if (graph.adjacent(*previous, next)) return 1.0;
  return 1.0 / q;
}

double log_sigmoid(double x) { return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x)); }


double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Eight partial sums break the add dependency chain; the fixed order keeps
// the result deterministic.
inline float dot(const float* __restrict a, const float* __restrict b, std::size_t n) {
  float s[8] = {};
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    for (std::size_t k = 0; k < 8; ++k) s[k] += a[i + k] * b[i + k];
  }
  for (; i < n; ++i) s[0] += a[i] * b[i];
  return ((s[0] + s[1]) + (s[2] + s[3])) + ((s[4] + s[5]) + (s[6] + s[7]));
}

// Tabulated logistic over [-kMaxExp, kMaxExp]; beyond it the gradient is
// taken as saturated, the way word2vec does it.
constexpr int kSigmoidTable = 1000;
constexpr float kMaxExp = 6.0f;

const std::array<float, kSigmoidTable> kSigmoid = [] {
  std::array<float, kSigmoidTable> t{};
  for (int i = 0; i < kSigmoidTable; ++i) {
    const double x = (2.0 * i / kSigmoidTable - 1.0) * kMaxExp;
    t[static_cast<std::size_t>(i)] = static_cast<float>(1.0 / (1.0 + std::exp(-x)));
  }
  return t;
}();

inline float fast_sigmoid(float f) {
  if (f >= kMaxExp) return 1.0f;
  if (f <= -kMaxExp) return 0.0f;
  const auto i = static_cast<std::size_t>((f + kMaxExp) * (kSigmoidTable / kMaxExp / 2.0f));
  return kSigmoid[std::min<std::size_t>(i, kSigmoidTable - 1)];
}

// One center/context example: the positive target first, then negatives.
// Built for AVX2 as well, picked at load time on CPUs that have it.
[[gnu::target_clones("avx2", "default")]] void sgns_update(float* __restrict center, float* __restrict acc,
                                                           float* __restrict output, const std::size_t* targets,
                                                           std::size_t count, float alpha, std::size_t dim) {
  std::fill(acc, acc + dim, 0.0f);
  for (std::size_t k = 0; k < count; ++k) {
    float* __restrict ctx = output + targets[k] * dim;
    const float label = k == 0 ? 1.0f : 0.0f;
    const float g = (label - fast_sigmoid(dot(center, ctx, dim))) * alpha;
    for (std::size_t d = 0; d < dim; ++d) {
      acc[d] += g * ctx[d];
      ctx[d] += g * center[d];
    }
  }
  for (std::size_t d = 0; d < dim; ++d) center[d] += acc[d];
}

}  // namespace

void WalkConfig::validate() const {
  if (num_walks < 1) throw ConfigError("num_walks must be at least 1");
  if (walk_length < 1) throw ConfigError("walk_length must be at least 1");
  if (!(p > 0.0) || !(q > 0.0)) throw ConfigError("p and q must be positive");
}

void TrainConfig::validate() const {
  if (dim < 1) throw ConfigError("dim must be at least 1");
  if (window < 1) throw ConfigError("window must be at least 1");
  if (epochs < 1) throw ConfigError("epochs must be at least 1");
  if (!(learning_rate > 0.0) || min_learning_rate < 0.0) throw ConfigError("learning rates must be positive");
}

std::vector<double> transition_probabilities(const AgfGraph& graph, std::optional<std::size_t> previous,
                                             std::size_t current, double p, double q) {
  const auto arcs = graph.out(current);
  std::vector<double> probs(arcs.size());
  double total = 0.0;
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    probs[i] = arcs[i].weight * bias(graph, previous, arcs[i].target, p, q);
    total += probs[i];
  }
  for (double& x : probs) x /= total;
  return probs;
}

std::optional<std::size_t> sample_next(const AgfGraph& graph, std::optional<std::size_t> previous,
                                       std::size_t current, double p, double q, Rng& rng) {
  const auto arcs = graph.out(current);
  if (arcs.empty()) return std::nullopt;
  if (arcs.size() == 1) return arcs.front().target;
  double total = 0.0;
  for (const Arc& a : arcs) total += a.weight * bias(graph, previous, a.target, p, q);
  double u = uniform01(rng) * total;
  for (const Arc& a : arcs) {
    u -= a.weight * bias(graph, previous, a.target, p, q);
    if (u < 0.0) return a.target;
  }
  return arcs.back().target;
}

std::vector<Walk> generate_walks(const AgfGraph& graph, const WalkConfig& cfg) {
  cfg.validate();
  if (graph.empty()) throw SizeError("cannot walk an empty graph");
  std::vector<Walk> walks;
  walks.reserve(cfg.num_walks * graph.size());
  for (std::size_t round = 0; round < cfg.num_walks; ++round) {
    for (std::size_t start = 0; start < graph.size(); ++start) {
      Rng rng(derive_seed(cfg.seed, start, round));
      Walk walk{start};
      walk.reserve(cfg.walk_length);
      std::optional<std::size_t> previous;
      while (walk.size() < cfg.walk_length) {
        const auto next = sample_next(graph, previous, walk.back(), cfg.p, cfg.q, rng);
        if (!next) break;
        previous = walk.back();
        walk.push_back(*next);
      }
      walks.push_back(std::move(walk));
    }
  }
  return walks;
}

SkipGramTrainer::SkipGramTrainer(std::vector<Walk> walks, std::size_t num_nodes, TrainConfig cfg)
    : walks_(std::move(walks)),
      cfg_(cfg),
      num_nodes_(num_nodes),
      input_(num_nodes * cfg.dim, 0.0f),
      output_(num_nodes * cfg.dim, 0.0f),
      rng_(cfg.seed) {
  cfg_.validate();
  if (walks_.empty()) throw SizeError("no walks to train on");

  std::vector<std::size_t> counts(num_nodes, 0);
  for (const Walk& w : walks_) {
    for (auto v : w) {
      if (v >= num_nodes) throw RangeError("walk visits node " + std::to_string(v) + " outside the graph");
      ++counts[v];
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
      const std::size_t lo = i >= cfg_.window ? i - cfg_.window : 0;
      const std::size_t hi = std::min(w.size() - 1, i + cfg_.window);
      pairs_per_epoch_ += hi - lo;
    }
  }
  for (std::size_t v = 0; v < num_nodes; ++v) {
    if (counts[v] == 0) throw CoverageError("node " + std::to_string(v) + " appears in no walk");
  }

  std::vector<double> weight(num_nodes);
  double sum = 0.0;
  for (std::size_t v = 0; v < num_nodes; ++v) sum += weight[v] = std::pow(static_cast<double>(counts[v]), 0.75);
  // Vose's alias method.
  noise_accept_.assign(num_nodes, 1.0);
  noise_alias_.resize(num_nodes);
  std::vector<std::size_t> small, large;
  for (std::size_t v = 0; v < num_nodes; ++v) {
    weight[v] *= static_cast<double>(num_nodes) / sum;
    noise_alias_[v] = v;
    (weight[v] < 1.0 ? small : large).push_back(v);
  }
  while (!small.empty() && !large.empty()) {
    const auto s = small.back();
    const auto l = large.back();
    small.pop_back();
    noise_accept_[s] = weight[s];
    noise_alias_[s] = l;
    weight[l] -= 1.0 - weight[s];
    if (weight[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }


  const double scale = 0.5 / static_cast<double>(cfg_.dim);
  for (float& x : input_) x = static_cast<float>((uniform01(rng_) * 2.0 - 1.0) * scale);
}

std::size_t SkipGramTrainer::sample_negative(Rng& rng) const {
  const auto v = static_cast<std::size_t>(uniform_index(rng, noise_alias_.size()));
  return uniform01(rng) < noise_accept_[v] ? v : noise_alias_[v];
}

void SkipGramTrainer::train_epoch() {
  const std::size_t dim = cfg_.dim;
  const double total = static_cast<double>(cfg_.epochs) * static_cast<double>(pairs_per_epoch_);
  double done = static_cast<double>(epochs_done_) * static_cast<double>(pairs_per_epoch_);
  std::vector<float> grad(dim);
  std::vector<std::size_t> targets(cfg_.negative_samples + 1);

  for (const Walk& w : walks_) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      const std::size_t lo = i >= cfg_.window ? i - cfg_.window : 0;
      const std::size_t hi = std::min(w.size() - 1, i + cfg_.window);
      const double progress = std::min(1.0, done / total);
      const auto alpha = static_cast<float>(
          std::max(cfg_.min_learning_rate, cfg_.learning_rate + (cfg_.min_learning_rate - cfg_.learning_rate) * progress));
      float* center = input_row(w[i]);

      for (std::size_t j = lo; j <= hi; ++j) {
        if (j == i) continue;
        std::size_t count = 0;
        targets[count++] = w[j];
        for (std::size_t k = 0; k < cfg_.negative_samples; ++k) {
          const auto neg = sample_negative(rng_);
          if (neg != w[j]) targets[count++] = neg;
        }
        sgns_update(center, grad.data(), output_.data(), targets.data(), count, alpha, dim);
      }
      done += static_cast<double>(hi - lo);
    }
  }
  ++epochs_done_;
}

double SkipGramTrainer::objective(std::span<const Walk> walks, std::uint64_t seed) const {
  Rng rng(seed);
  double sum = 0.0;
  std::size_t pairs = 0;
  for (const Walk& w : walks) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      const std::size_t lo = i >= cfg_.window ? i - cfg_.window : 0;
      const std::size_t hi = std::min(w.size() - 1, i + cfg_.window);
      for (std::size_t j = lo; j <= hi; ++j) {
        if (j == i) continue;
        const float* center = input_row(w[i]);
        double term = log_sigmoid(dot(center, output_row(w[j]), cfg_.dim));
        for (std::size_t k = 0; k < cfg_.negative_samples; ++k) {
          const auto neg = sample_negative(rng);
          if (neg == w[j]) continue;
          term += log_sigmoid(-dot(center, output_row(neg), cfg_.dim));
        }
        sum += term;
        ++pairs;
      }
    }
  }
  return pairs == 0 ? 0.0 : sum / static_cast<double>(pairs);
}

Matrix SkipGramTrainer::embeddings() const {
  Matrix m(num_nodes_, cfg_.dim);
  std::copy(input_.begin(), input_.end(), m.data().begin());
  return m;
}

Matrix train_skipgram(std::span<const Walk> walks, std::size_t num_nodes, const TrainConfig& cfg) {
  SkipGramTrainer trainer(std::vector<Walk>(walks.begin(), walks.end()), num_nodes, cfg);
  for (std::size_t e = 0; e < cfg.epochs; ++e) trainer.train_epoch();
  return trainer.embeddings();
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DomainError("cosine of vectors with different sizes");
  const double na = std::sqrt(dot(a, a));
  const double nb = std::sqrt(dot(b, b));
  if (na == 0.0 || nb == 0.0) throw DomainError("cosine of a zero vector");
  return std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
}

}  // namespace topicgraph
