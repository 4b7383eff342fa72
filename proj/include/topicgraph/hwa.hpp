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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "topicgraph/cooc.hpp"

namespace topicgraph {

struct KeywordRating {
  double kr = 0.0;
  std::uint64_t tf = 0;  // kept for tie-breaking during selection
};

using KeywordRatings = std::map<std::string, KeywordRating>;

/// kr(w) = tf(w) * ln(batch_size / df(w)). Throws DomainError when some word
/// has df = 0 or df > batch_size.
KeywordRatings keyword_rating(const CoocGraph& graph);

/// Number of words kept for a vocabulary of `vocabulary` words at `h` percent:
/// ceil(h / 100 * vocabulary).
std::size_t keyword_quota(double h, std::size_t vocabulary);

/// The top ceil(h% * |W|) words ordered by descending kr, then descending tf,
/// then word. Words with kr == 0 are dropped even inside the cut. Throws
/// ConfigError for h outside (0, 100] and SizeError on empty ratings.
std::vector<std::string> select_keywords(const KeywordRatings& ratings, double h);

/// Asymmetric association of x toward y:
///   cooc(x,y) / tf(y) + delta * cooc(x,y) / tf(x)
double cimawa(const std::string& x, const std::string& y, const CoocGraph& graph, double delta);

struct Arc {
  std::size_t target = 0;
  double weight = 0.0;

  bool operator==(const Arc&) const = default;
};

/// Directed weighted graph over keywords. Nodes are kept in lexicographic
/// order; each node carries its keyword rating.
class AgfGraph {
 public:
  AgfGraph() = default;
  /// Nodes with unit ratings.
  explicit AgfGraph(std::vector<std::string> words);
  AgfGraph(std::vector<std::string> words, std::vector<double> ratings);

  std::size_t size() const noexcept { return words_.size(); }
  bool empty() const noexcept { return words_.empty(); }
  const std::vector<std::string>& words() const noexcept { return words_; }
  const std::string& word(std::size_t i) const { return words_.at(i); }
  double rating(std::size_t i) const { return ratings_.at(i); }
  std::optional<std::size_t> index_of(const std::string& word) const;

  /// Inserts or overwrites the src -> dst arc. Weight must be positive.
  void set_arc(std::size_t src, std::size_t dst, double weight);
  /// Out-arcs sorted by target.
  std::span<const Arc> out(std::size_t node) const { return out_.at(node); }
  /// Zero when there is no arc.
  double weight(std::size_t src, std::size_t dst) const;
  /// True when an arc exists in either direction.
  bool adjacent(std::size_t a, std::size_t b) const { return weight(a, b) > 0 || weight(b, a) > 0; }
  std::size_t arc_count() const noexcept;

  std::int64_t window() const noexcept { return window_; }
  void set_window(std::int64_t w) noexcept { window_ = w; }

  bool operator==(const AgfGraph&) const = default;

 private:
  std::vector<std::string> words_;
  std::vector<double> ratings_;
  std::vector<std::vector<Arc>> out_;
  std::int64_t window_ = 0;
};

/// Keeps the keyword nodes and, for each ordered keyword pair with
/// cooc > 0, an arc weighted cimawa(x,y) * kr(x) / kr(y).
AgfGraph build_agf_graph(const CoocGraph& graph, std::span<const std::string> keywords,
                         const KeywordRatings& ratings, double delta);

/// Writes `<prefix>.nodes.tsv` (word, kr) and `<prefix>.edges.tsv` (src, dst, agf).
void write_agf_graph(const AgfGraph& graph, const std::filesystem::path& prefix);
AgfGraph read_agf_graph(const std::filesystem::path& prefix);

}  // namespace topicgraph
