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
#include <span>
#include <string>
#include <vector>

#include "topicgraph/hwa.hpp"
#include "topicgraph/matrix.hpp"

namespace topicgraph {

/// One label per point; -1 marks noise.
using ClusterLabels = std::vector<int>;
constexpr int kNoise = -1;

struct KMeansResult {
  ClusterLabels labels;
  Matrix centers;
  /// Inertia after every assignment step, first entry from the seeding.
  std::vector<double> inertia;
  std::size_t iterations = 0;
};

/// Lloyd iterations from k-means++ seeding until the assignment stops
/// changing or `max_iter` updates ran. An emptied cluster is re-seeded with
/// the point farthest from its center. Throws SizeError when k exceeds the
/// number of points.
KMeansResult kmeans(const Matrix& points, std::size_t k, std::size_t max_iter, std::uint64_t seed);

enum class ClusterSelection { excess_of_mass, leaf };

struct HdbscanConfig {
  std::size_t min_cluster_size = 5;
  /// Neighbors (counting the point itself) for core distances; 0 means
  /// min_cluster_size.
  std::size_t min_samples = 0;
  ClusterSelection selection = ClusterSelection::excess_of_mass;
  /// Lets the root be selected, so one dense group plus outliers yields a
  /// single cluster instead of all noise.
  bool allow_single_cluster = true;
};

/// Density clustering over mutual-reachability distances: minimum spanning
/// tree, condensed hierarchy, stability-based selection. Points outside the
/// selected clusters are noise; every cluster has at least
/// min_cluster_size members.
ClusterLabels hdbscan(const Matrix& points, const HdbscanConfig& cfg);

inline ClusterLabels hdbscan(const Matrix& points, std::size_t min_cluster_size) {
  return hdbscan(points, HdbscanConfig{min_cluster_size});
}

struct Topic {
  std::vector<std::string> keywords;  // by descending rating
  double score = 0.0;
  int label = 0;

  bool operator==(const Topic&) const = default;
};

enum class TopicScore { rating_sum, cluster_size };

/// One topic per non-noise cluster of `words`, ordered by descending score
/// and then ascending label.
std::vector<Topic> extract_topics(std::span<const std::string> words, const ClusterLabels& labels,
                                  const KeywordRatings& ratings, TopicScore score = TopicScore::rating_sum);

/// The first min(k, topics.size()) topics.
std::vector<Topic> top_k_topics(std::span<const Topic> topics, std::size_t k);

}  // namespace topicgraph
