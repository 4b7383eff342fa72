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
#include <map>
#include <span>
#include <string>
#include <utility>

#include "topicgraph/tokenize.hpp"

namespace topicgraph {

struct TermStats {
  std::uint64_t tf = 0;  // occurrences in the post or window
  std::uint64_t df = 0;  // posts containing the word

  bool operator==(const TermStats&) const = default;
};

/// Unordered word pair stored with its endpoints in lexicographic order.
class WordPair {
 public:
  WordPair(std::string a, std::string b) {
    if (b < a) std::swap(a, b);
    first_ = std::move(a);
    second_ = std::move(b);
  }
  const std::string& first() const noexcept { return first_; }
  const std::string& second() const noexcept { return second_; }

  auto operator<=>(const WordPair&) const = default;

 private:
  std::string first_;
  std::string second_;
};

/// Undirected co-occurrence graph with TF/DF node tags. A single post's graph
/// has unit edge weights and df = 1; a window graph is the sum of its posts.
class CoocGraph {
 public:
  using NodeMap = std::map<std::string, TermStats>;
  using EdgeMap = std::map<WordPair, std::uint64_t>;

  const NodeMap& nodes() const noexcept { return nodes_; }
  const EdgeMap& edges() const noexcept { return edges_; }

  /// Posts folded into this graph.
  std::uint64_t batch_size() const noexcept { return batch_size_; }
  void set_batch_size(std::uint64_t n) noexcept { batch_size_ = n; }

  std::int64_t window() const noexcept { return window_; }
  void set_window(std::int64_t w) noexcept { window_ = w; }

  bool contains(const std::string& word) const { return nodes_.contains(word); }
  /// Zero-initialized stats for unknown words.
  TermStats stats(const std::string& word) const;
  /// Symmetric; zero when absent or x == y.
  std::uint64_t cooc(const std::string& x, const std::string& y) const;

  /// Adds tf/df to a node, inserting it if absent.
  void add_node(const std::string& word, TermStats delta);
  /// Adds weight to the x-y edge, inserting it if absent. Self-loops are
  /// rejected with DomainError.
  void add_edge(const std::string& x, const std::string& y, std::uint64_t weight);

  bool operator==(const CoocGraph&) const = default;

 private:
  NodeMap nodes_;
  EdgeMap edges_;
  std::uint64_t batch_size_ = 0;
  std::int64_t window_ = 0;
};

/// One node per distinct word (tf = multiplicity, df = 1) and a unit edge
/// between every pair of distinct words.
CoocGraph post_graph(const ProcessedPost& post);

/// Sums tf, df, edge weights and batch sizes of `post` into `batch`.
void merge_post(CoocGraph& batch, const CoocGraph& post);

/// Folds every post (empty ones included in batch_size) into a window graph.
CoocGraph build_batch_graph(std::span<const ProcessedPost> posts);

/// Writes `<prefix>.nodes.tsv` and `<prefix>.edges.tsv`.
void write_cooc_graph(const CoocGraph& graph, const std::filesystem::path& prefix);
CoocGraph read_cooc_graph(const std::filesystem::path& prefix);

}  // namespace topicgraph
