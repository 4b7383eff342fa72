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


#include "topicgraph/cooc.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "topicgraph/errors.hpp"
#include "tsv.hpp"

namespace topicgraph {

TermStats CoocGraph::stats(const std::string& word) const {
  const auto it = nodes_.find(word);
  return it == nodes_.end() ? TermStats{} : it->second;
}

std::uint64_t CoocGraph::cooc(const std::string& x, const std::string& y) const {
  if (x == y) return 0;
  const auto it = edges_.find(WordPair(x, y));
  return it == edges_.end() ? 0 : it->second;
}

void CoocGraph::add_node(const std::string& word, TermStats delta) {
  auto& s = nodes_[word];
  s.tf += delta.tf;
  s.df += delta.df;
}

void CoocGraph::add_edge(const std::string& x, const std::string& y, std::uint64_t weight) {
  if (x == y) throw DomainError("self-loop on '" + x + "'");
  edges_[WordPair(x, y)] += weight;
}

CoocGraph post_graph(const ProcessedPost& post) {
  std::map<std::string, std::uint64_t> counts;
  for (const auto& w : post.words) ++counts[w];
  CoocGraph g;
  for (const auto& [w, n] : counts) g.add_node(w, {n, 1});
  for (auto a = g.nodes().begin(); a != g.nodes().end(); ++a) {
    for (auto b = std::next(a); b != g.nodes().end(); ++b) g.add_edge(a->first, b->first, 1);
  }
  g.set_batch_size(1);
  return g;
}

void merge_post(CoocGraph& batch, const CoocGraph& post) {
  for (const auto& [word, s] : post.nodes()) batch.add_node(word, s);
  for (const auto& [pair, w] : post.edges()) batch.add_edge(pair.first(), pair.second(), w);
  batch.set_batch_size(batch.batch_size() + post.batch_size());
}

CoocGraph build_batch_graph(std::span<const ProcessedPost> posts) {
  CoocGraph g;
  for (const auto& p : posts) merge_post(g, post_graph(p));
  return g;
}

void write_cooc_graph(const CoocGraph& graph, const std::filesystem::path& prefix) {
  const std::string header =
      "# window=" + std::to_string(graph.window()) + " batch_size=" + std::to_string(graph.batch_size());
  auto nodes = detail::open_out(detail::with_suffix(prefix, ".nodes.tsv"));
  nodes << header << '\n';
  for (const auto& [w, s] : graph.nodes()) nodes << w << '\t' << s.tf << '\t' << s.df << '\n';
  auto edges = detail::open_out(detail::with_suffix(prefix, ".edges.tsv"));
  edges << header << '\n';
  for (const auto& [p, c] : graph.edges()) edges << p.first() << '\t' << p.second() << '\t' << c << '\n';
}

CoocGraph read_cooc_graph(const std::filesystem::path& prefix) {
  CoocGraph g;
  const auto node_path = detail::with_suffix(prefix, ".nodes.tsv");
  auto nodes = detail::open_in(node_path);
  const auto header = detail::read_header(nodes, node_path);
  g.set_window(std::stoll(header.at("window")));
  g.set_batch_size(std::stoull(header.at("batch_size")));
  detail::for_each_row(nodes, 3, [&](const std::vector<std::string>& f, std::size_t line) {
    g.add_node(f[0], {detail::parse_u64(f[1], line), detail::parse_u64(f[2], line)});
  });
  const auto edge_path = detail::with_suffix(prefix, ".edges.tsv");
  auto edges = detail::open_in(edge_path);
  detail::read_header(edges, edge_path);
  detail::for_each_row(edges, 3, [&](const std::vector<std::string>& f, std::size_t line) {
    g.add_edge(f[0], f[1], detail::parse_u64(f[2], line));
  });
  return g;
}

}  // namespace topicgraph
