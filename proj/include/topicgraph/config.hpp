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

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "topicgraph/cluster.hpp"
#include "topicgraph/corpus.hpp"
#include "topicgraph/embed.hpp"
#include "topicgraph/reduce.hpp"

namespace topicgraph {

enum class EmbeddingMethod { node2vec, deepwalk };
enum class ClusteringMethod { kmeans, hdbscan };

/// Every tunable of a run. Defaults are the tuned values of the method:
/// h = 10 %, delta = 0.1, 64 walks of length 8, D = 32, W = 10, 100 epochs,
/// p = 0.5, q = 1, 2 neighbors, HDBSCAN with minimum cluster size 5
/// (k-means: 8 clusters, 300 iterations).
struct PipelineConfig {
  // corpus
  std::int64_t window_seconds = 12 * 3600;
  std::optional<Timestamp> origin;  // default: midnight UTC before the first post
  std::filesystem::path stopwords;
  /// Count posts left empty by filtering in the batch size used by ratings.
  bool count_empty_posts = true;

  // hwa
  double h = 10.0;
  double delta = 0.1;

  // embed
  EmbeddingMethod embedding = EmbeddingMethod::node2vec;
  WalkConfig walk;
  TrainConfig train;

  ReduceConfig reduce;

  // cluster
  ClusteringMethod clustering = ClusteringMethod::hdbscan;
  std::size_t n_clusters = 8;
  std::size_t max_iter = 300;
  HdbscanConfig hdbscan;
  TopicScore topic_score = TopicScore::rating_sum;
  std::size_t top_k = 3;

  // eval
  double match_threshold = 0.5;
  double w_omega = 1.0;
  double w_c = 1.0;

  // run
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::filesystem::path input;
  std::filesystem::path out;
  std::optional<std::filesystem::path> ground_truth;
  bool keep_intermediates = false;
  std::vector<std::int64_t> windows;  // empty: all

  /// Throws ConfigError on any out-of-range value.
  void validate() const;

  /// Walk parameters after applying the embedding method (DeepWalk fixes
  /// p = q = 1).
  WalkConfig effective_walk() const;
};

/// Sets `section.key` from text. Throws ConfigError for unknown keys or
/// unparsable values.
void apply_setting(PipelineConfig& cfg, const std::string& dotted_key, const std::string& value);

/// All keys accepted by apply_setting, as `section.key`.
const std::vector<std::string>& setting_keys();

/// Current value of a setting in the text form apply_setting accepts.
std::string setting_value(const PipelineConfig& cfg, const std::string& dotted_key);

/// Flat INI-style text: `[section]` headers and `key = value` lines.
void load_config(PipelineConfig& cfg, std::istream& in);
void load_config(PipelineConfig& cfg, const std::filesystem::path& path);

/// Every setting, in the format load_config reads.
std::string dump_config(const PipelineConfig& cfg);

}  // namespace topicgraph
