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


#include "topicgraph/hwa.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "topicgraph/errors.hpp"
#include "tsv.hpp"

namespace topicgraph {

KeywordRatings keyword_rating(const CoocGraph& graph) {
  const auto n = graph.batch_size();
  KeywordRatings out;
  for (const auto& [word, s] : graph.nodes()) {
    if (s.df == 0 || s.df > n) {
      throw DomainError("word '" + word + "' has df " + std::to_string(s.df) + " outside [1, " +
                        std::to_string(n) + "]");
    }
    const double kr = static_cast<double>(s.tf) * std::log(static_cast<double>(n) / static_cast<double>(s.df));
    out.emplace(word, KeywordRating{kr, s.tf});
  }
  return out;
}

std::size_t keyword_quota(double h, std::size_t vocabulary) {
  if (!(h > 0.0 && h <= 100.0)) throw ConfigError("keyword rate h must lie in (0, 100]");
  // The tolerance absorbs representation error, e.g. 10% of 70 words.
  const double exact = h * static_cast<double>(vocabulary) / 100.0;
  const auto quota = static_cast<std::size_t>(std::ceil(exact - 1e-9));
  return std::min(quota, vocabulary);
}

std::vector<std::string> select_keywords(const KeywordRatings& ratings, double h) {
  const std::size_t quota = keyword_quota(h, ratings.size());
  if (ratings.empty()) throw SizeError("cannot select keywords from an empty vocabulary");

  std::vector<const KeywordRatings::value_type*> ranked;
  ranked.reserve(ratings.size());
  for (const auto& entry : ratings) ranked.push_back(&entry);
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto* a, const auto* b) {
    if (a->second.kr != b->second.kr) return a->second.kr > b->second.kr;
    if (a->second.tf != b->second.tf) return a->second.tf > b->second.tf;
    return a->first < b->first;
  });

  std::vector<std::string> keywords;
  for (std::size_t i = 0; i < quota; ++i) {
    if (ranked[i]->second.kr > 0.0) keywords.push_back(ranked[i]->first);
  }
  return keywords;
}

double cimawa(const std::string& x, const std::string& y, const CoocGraph& graph, double delta) {
  if (x == y) throw DomainError("cimawa needs two distinct words");
  const auto tf_x = graph.stats(x).tf;
  const auto tf_y = graph.stats(y).tf;
  if (tf_x == 0 || tf_y == 0) throw DomainError("cimawa of a word with zero tf");
  const auto c = static_cast<double>(graph.cooc(x, y));
  return c / static_cast<double>(tf_y) + delta * c / static_cast<double>(tf_x);
}

AgfGraph::AgfGraph(std::vector<std::string> words) : AgfGraph(words, std::vector<double>(words.size(), 1.0)) {}

AgfGraph::AgfGraph(std::vector<std::string> words, std::vector<double> ratings) {
  if (words.size() != ratings.size()) throw ValidationError("one rating per node required");
  std::vector<std::size_t> order(words.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return words[a] < words[b]; });
  for (auto i : order) {
    if (!words_.empty() && words_.back() == words[i]) throw ValidationError("duplicate node '" + words[i] + "'");
    words_.push_back(std::move(words[i]));
    ratings_.push_back(ratings[i]);
  }
  out_.resize(words_.size());
}

std::optional<std::size_t> AgfGraph::index_of(const std::string& word) const {
  const auto it = std::lower_bound(words_.begin(), words_.end(), word);
  if (it == words_.end() || *it != word) return std::nullopt;
  return static_cast<std::size_t>(it - words_.begin());
}

void AgfGraph::set_arc(std::size_t src, std::size_t dst, double weight) {
  if (src >= size() || dst >= size()) throw RangeError("arc endpoint out of range");
  if (src == dst) throw DomainError("self-loop on '" + words_[src] + "'");
  if (!(weight > 0.0) || !std::isfinite(weight)) throw DomainError("arc weight must be positive and finite");
  auto& arcs = out_[src];
  const auto it = std::lower_bound(arcs.begin(), arcs.end(), dst, [](const Arc& a, std::size_t t) { return a.target < t; });
  if (it != arcs.end() && it->target == dst) {
    it->weight = weight;
  } else {
    arcs.insert(it, Arc{dst, weight});
  }
}

double AgfGraph::weight(std::size_t src, std::size_t dst) const {
  const auto& arcs = out_.at(src);
  const auto it = std::lower_bound(arcs.begin(), arcs.end(), dst, [](const Arc& a, std::size_t t) { return a.target < t; });
  return it != arcs.end() && it->target == dst ? it->weight : 0.0;
}

std::size_t AgfGraph::arc_count() const noexcept {
  std::size_t n = 0;
  for (const auto& arcs : out_) n += arcs.size();
  return n;
}

AgfGraph build_agf_graph(const CoocGraph& graph, std::span<const std::string> keywords,
                         const KeywordRatings& ratings, double delta) {
  std::vector<std::string> words(keywords.begin(), keywords.end());
  std::vector<double> kr;
  kr.reserve(words.size());
  for (const auto& w : words) {
    const auto it = ratings.find(w);
    if (it == ratings.end()) throw ValidationError("keyword '" + w + "' has no rating");
    if (!(it->second.kr > 0.0)) throw DomainError("keyword '" + w + "' has a degenerate rating");
    kr.push_back(it->second.kr);
  }

  AgfGraph agf(std::move(words), std::move(kr));
  agf.set_window(graph.window());
  for (const auto& [pair, c] : graph.edges()) {
    if (c == 0) continue;
    const auto x = agf.index_of(pair.first());
    const auto y = agf.index_of(pair.second());
    if (!x || !y) continue;
    const double kx = agf.rating(*x);
    const double ky = agf.rating(*y);
    agf.set_arc(*x, *y, cimawa(pair.first(), pair.second(), graph, delta) * kx / ky);
    agf.set_arc(*y, *x, cimawa(pair.second(), pair.first(), graph, delta) * ky / kx);
  }
  return agf;
}

void write_agf_graph(const AgfGraph& graph, const std::filesystem::path& prefix) {
  const std::string header = "# window=" + std::to_string(graph.window()) + " nodes=" + std::to_string(graph.size());
  auto nodes = detail::open_out(detail::with_suffix(prefix, ".nodes.tsv"));
  nodes << header << '\n';
  for (std::size_t i = 0; i < graph.size(); ++i) {
    nodes << graph.word(i) << '\t' << detail::format_double(graph.rating(i)) << '\n';
  }
  auto edges = detail::open_out(detail::with_suffix(prefix, ".edges.tsv"));
  edges << header << '\n';
  for (std::size_t i = 0; i < graph.size(); ++i) {
    for (const Arc& a : graph.out(i)) {
      edges << graph.word(i) << '\t' << graph.word(a.target) << '\t' << detail::format_double(a.weight) << '\n';
    }
  }
}

AgfGraph read_agf_graph(const std::filesystem::path& prefix) {
  const auto node_path = detail::with_suffix(prefix, ".nodes.tsv");
  auto nodes = detail::open_in(node_path);
  const auto header = detail::read_header(nodes, node_path);
  std::vector<std::string> words;
  std::vector<double> ratings;
  detail::for_each_row(nodes, 2, [&](const std::vector<std::string>& f, std::size_t line) {
    words.push_back(f[0]);
    ratings.push_back(detail::parse_double(f[1], line));
  });
  AgfGraph g(std::move(words), std::move(ratings));
  if (const auto it = header.find("window"); it != header.end()) g.set_window(std::stoll(it->second));

  const auto edge_path = detail::with_suffix(prefix, ".edges.tsv");
  auto edges = detail::open_in(edge_path);
  detail::read_header(edges, edge_path);
  detail::for_each_row(edges, 3, [&](const std::vector<std::string>& f, std::size_t line) {
    const auto s = g.index_of(f[0]);
    const auto d = g.index_of(f[1]);
    if (!s || !d) throw ParseError("edge references an unknown node", line);
    g.set_arc(*s, *d, detail::parse_double(f[2], line));
  });
  return g;
}

}  // namespace topicgraph
