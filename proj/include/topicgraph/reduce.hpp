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
#include <vector>

#include "topicgraph/matrix.hpp"

namespace topicgraph {

struct ReduceConfig {
  std::size_t n_neighbors = 2;
  double min_dist = 0.1;
  double spread = 1.0;
  std::size_t target_dim = 2;
  std::size_t n_epochs = 500;
  std::size_t negative_sample_rate = 5;
  double learning_rate = 1.0;
  double repulsion_strength = 1.0;
  std::uint64_t seed = 0;

  /// Checks parameter ranges and that `points` is enough for n_neighbors.
  void validate(std::size_t points) const;
};

struct Neighbor {
  std::size_t index = 0;
  double distance = 0.0;
  double membership = 0.0;  // in (0, 1]
};

/// Neighbors of each point, nearest first.
using NeighborLists = std::vector<std::vector<Neighbor>>;

/// Exact k nearest neighbors (Euclidean, ties by index) with fuzzy
/// memberships exp(-(d - rho) / sigma): rho is the nearest-neighbor distance
/// and sigma is calibrated so each point's memberships sum to
/// log2(n_neighbors). Throws SizeError with fewer than n_neighbors + 1 points.
NeighborLists knn_graph(const Matrix& points, std::size_t n_neighbors);

struct WeightedEdge {
  std::size_t a = 0;
  std::size_t b = 0;  // a < b
  double weight = 0.0;
};

/// Fuzzy union a + b - ab of the directed membership graph.
std::vector<WeightedEdge> symmetrize(const NeighborLists& neighbors);

/// Parameters of the low-dimensional similarity 1 / (1 + a d^(2b)), fitted to
/// the offset-exponential target defined by spread and min_dist.
struct CurveParams {
  double a = 0.0;
  double b = 0.0;
};
CurveParams fit_curve(double spread, double min_dist);

/// Spectral layout of the fuzzy graph. Disconnected graphs place each
/// component at the principal-component projection of its centroid in
/// `points` and lay it out locally. Falls back to a seeded uniform layout
/// when no spectral solution is available. Scaled to [0, 10] per axis.
Matrix initial_layout(const Matrix& points, const std::vector<WeightedEdge>& graph, std::size_t target_dim,
                      std::uint64_t seed);

/// Neighbor-graph layout reduction: kNN fuzzy graph, initial layout, then
/// stochastic descent on the attractive/repulsive cross-entropy with negative
/// sampling. Deterministic for a fixed seed.
Matrix reduce(const Matrix& points, const ReduceConfig& cfg);

}  // namespace topicgraph
