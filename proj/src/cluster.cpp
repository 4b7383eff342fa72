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


#include "topicgraph/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "topicgraph/errors.hpp"
#include "topicgraph/random.hpp"

namespace topicgraph {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// k-means

std::pair<ClusterLabels, double> assign(const Matrix& points, const Matrix& centers) {
  ClusterLabels labels(points.rows());
  double inertia = 0.0;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    double best = kInf;
    int arg = 0;
    for (std::size_t c = 0; c < centers.rows(); ++c) {
      const double d = squared_distance(points.row(i), centers.row(c));
      if (d < best) {
        best = d;
        arg = static_cast<int>(c);
      }
    }
    labels[i] = arg;
    inertia += best;
  }
  return {labels, inertia};
}

Matrix seed_centers(const Matrix& points, std::size_t k, Rng& rng) {
  const std::size_t n = points.rows();
  Matrix centers(k, points.cols());
  std::vector<bool> chosen(n, false);
  std::vector<double> d2(n, kInf);

  std::size_t pick = uniform_index(rng, n);
  for (std::size_t c = 0; c < k; ++c) {
    if (c > 0) {
      const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
      if (total > 0.0) {
        double u = uniform01(rng) * total;
        pick = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
          u -= d2[i];
          if (u < 0.0 && d2[i] > 0.0) {
            pick = i;
            break;
          }
        }
      } else {
        pick = static_cast<std::size_t>(std::find(chosen.begin(), chosen.end(), false) - chosen.begin());
      }
    }
    chosen[pick] = true;
    std::copy(points.row(pick).begin(), points.row(pick).end(), centers.row(c).begin());
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], squared_distance(points.row(i), centers.row(c)));
  }
  return centers;
}

Matrix update_centers(const Matrix& points, ClusterLabels& labels, const Matrix& previous) {
  const std::size_t k = previous.rows();
  std::vector<std::size_t> counts(k, 0);
  for (int l : labels) ++counts[static_cast<std::size_t>(l)];

  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] != 0) continue;
    double farthest = -1.0;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < points.rows(); ++i) {
      const auto l = static_cast<std::size_t>(labels[i]);
      if (counts[l] < 2) continue;
      const double d = squared_distance(points.row(i), previous.row(l));
      if (d > farthest) {
        farthest = d;
        arg = i;
      }
    }
    --counts[static_cast<std::size_t>(labels[arg])];
    labels[arg] = static_cast<int>(c);
    counts[c] = 1;
  }

  Matrix centers(k, points.cols());
  for (std::size_t i = 0; i < points.rows(); ++i) {
    auto row = centers.row(static_cast<std::size_t>(labels[i]));
    const auto p = points.row(i);
    for (std::size_t d = 0; d < row.size(); ++d) row[d] += p[d];
  }
  for (std::size_t c = 0; c < k; ++c) {
    for (double& v : centers.row(c)) v /= static_cast<double>(counts[c]);
  }
  return centers;
}

// ---------------------------------------------------------------------------
// HDBSCAN

struct LinkageRow {
  std::size_t left;
  std::size_t right;
  double distance;
  std::size_t size;
};

struct CondensedRow {
  std::size_t parent;
  std::size_t child;
  double lambda;
  std::size_t size;
};

double to_lambda(double distance) { return distance > 0.0 ? 1.0 / distance : kInf; }

/// a - b with inf - inf taken as zero.
double lambda_gap(double a, double b) { return a == b ? 0.0 : a - b; }

std::vector<double> core_distances(const Matrix& points, std::size_t min_samples) {
  const std::size_t n = points.rows();
  std::vector<double> core(n, 0.0);
  const std::size_t k = std::min(min_samples, n);
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) d[j] = std::sqrt(squared_distance(points.row(i), points.row(j)));
    // d[i] == 0 is the point itself, so position k-1 is its k-th neighbor.
    std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k - 1), d.end());
    core[i] = d[k - 1];
  }
  return core;
}

/// Prim's algorithm on the dense mutual-reachability graph; edges come back
/// sorted by weight.
std::vector<LinkageRow> mst_linkage(const Matrix& points, const std::vector<double>& core) {
  const std::size_t n = points.rows();
  std::vector<bool> in_tree(n, false);
  std::vector<double> best(n, kInf);
  std::vector<std::size_t> from(n, 0);
  struct Edge {
    std::size_t a, b;
    double w;
  };
  std::vector<Edge> edges;
  std::size_t current = 0;
  in_tree[0] = true;
  for (std::size_t step = 1; step < n; ++step) {
    for (std::size_t j = 0; j < n; ++j) {
      if (in_tree[j]) continue;
      const double d = std::sqrt(squared_distance(points.row(current), points.row(j)));
      const double mr = std::max({d, core[current], core[j]});
      if (mr < best[j]) {
        best[j] = mr;
        from[j] = current;
      }
    }
    std::size_t next = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (!in_tree[j] && (next == n || best[j] < best[next])) next = j;
    }
    edges.push_back({from[next], next, best[next]});
    in_tree[next] = true;
    current = next;
  }
  std::stable_sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) { return x.w < y.w; });

  // Single-linkage dendrogram: node ids >= n are merges in order.
  std::vector<std::size_t> parent(2 * n - 1);
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<std::size_t> size(2 * n - 1, 1);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<LinkageRow> rows;
  std::size_t next_id = n;
  for (const auto& e : edges) {
    const auto ra = find(e.a);
    const auto rb = find(e.b);
    rows.push_back({ra, rb, e.w, size[ra] + size[rb]});
    parent[ra] = parent[rb] = next_id;
    size[next_id] = size[ra] + size[rb];
    ++next_id;
  }
  return rows;
}

std::vector<CondensedRow> condense(const std::vector<LinkageRow>& linkage, std::size_t n, std::size_t min_size) {
  const std::size_t root = 2 * n - 2;
  auto node_size = [&](std::size_t node) { return node < n ? std::size_t{1} : linkage[node - n].size; };
  auto leaves_under = [&](std::size_t node, std::vector<std::size_t>& out) {
    std::vector<std::size_t> stack{node};
    while (!stack.empty()) {
      const auto x = stack.back();
      stack.pop_back();
      if (x < n) {
        out.push_back(x);
      } else {
        stack.push_back(linkage[x - n].right);
        stack.push_back(linkage[x - n].left);
      }
    }
  };

  std::vector<std::size_t> relabel(2 * n - 1, 0);
  std::size_t next_label = n + 1;
  relabel[root] = n;
  std::vector<CondensedRow> out;
  std::vector<std::size_t> queue{root};
  std::vector<std::size_t> leaves;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const auto node = queue[qi];
    const auto& row = linkage[node - n];
    const double lambda = to_lambda(row.distance);
    const std::size_t parent = relabel[node];
    const std::size_t lc = node_size(row.left);
    const std::size_t rc = node_size(row.right);

    auto fall_out = [&](std::size_t child) {
      leaves.clear();
      leaves_under(child, leaves);
      for (auto leaf : leaves) out.push_back({parent, leaf, lambda, 1});
    };
    auto continue_as = [&](std::size_t child, std::size_t label) {
      relabel[child] = label;
      if (child >= n) queue.push_back(child);
    };

    if (lc >= min_size && rc >= min_size) {
      for (auto [child, count] : {std::pair{row.left, lc}, std::pair{row.right, rc}}) {
        const auto label = next_label++;
        out.push_back({parent, label, lambda, count});
        continue_as(child, label);
      }
    } else if (lc < min_size && rc < min_size) {
      fall_out(row.left);
      fall_out(row.right);
    } else if (lc < min_size) {
      fall_out(row.left);
      continue_as(row.right, parent);
    } else {
      fall_out(row.right);
      continue_as(row.left, parent);
    }
  }
  return out;
}

std::map<std::size_t, double> stabilities(const std::vector<CondensedRow>& tree, std::size_t root) {
  std::map<std::size_t, double> birth{{root, 0.0}};
  for (const auto& r : tree) {
    if (r.size > 1 || r.child > root) birth[r.child] = r.lambda;
  }
  std::map<std::size_t, double> stab;
  for (const auto& [c, b] : birth) stab[c] = 0.0;
  for (const auto& r : tree) stab[r.parent] += lambda_gap(r.lambda, birth[r.parent]) * static_cast<double>(r.size);
  return stab;
}

}  // namespace

KMeansResult kmeans(const Matrix& points, std::size_t k, std::size_t max_iter, std::uint64_t seed) {
  if (k < 1) throw ConfigError("k must be at least 1");
  if (points.rows() < k) {
    throw SizeError("k = " + std::to_string(k) + " exceeds the " + std::to_string(points.rows()) + " points");
  }
  Rng rng(seed);
  KMeansResult r;
  r.centers = seed_centers(points, k, rng);
  auto [labels, inertia] = assign(points, r.centers);
  r.inertia.push_back(inertia);
  for (std::size_t it = 0; it < max_iter; ++it) {
    r.centers = update_centers(points, labels, r.centers);
    auto [next, next_inertia] = assign(points, r.centers);
    r.inertia.push_back(next_inertia);
    ++r.iterations;
    const bool stable = next == labels;
    labels = std::move(next);
    if (stable) break;
  }
  r.labels = std::move(labels);
  return r;
}

ClusterLabels hdbscan(const Matrix& points, const HdbscanConfig& cfg) {
  if (cfg.min_cluster_size < 2) throw ConfigError("min_cluster_size must be at least 2");
  const std::size_t n = points.rows();
  ClusterLabels labels(n, kNoise);
  if (n < cfg.min_cluster_size || n < 2) return labels;

  const std::size_t min_samples = cfg.min_samples == 0 ? cfg.min_cluster_size : cfg.min_samples;
  const auto linkage = mst_linkage(points, core_distances(points, min_samples));
  const auto tree = condense(linkage, n, cfg.min_cluster_size);
  const std::size_t root = n;

  auto stab = stabilities(tree, root);
  std::map<std::size_t, std::vector<std::size_t>> children;
  std::map<std::size_t, std::size_t> parent_of;
  for (const auto& r : tree) {
    if (r.child > root) {
      children[r.parent].push_back(r.child);
      parent_of[r.child] = r.parent;
    }
  }

  std::map<std::size_t, bool> selected;
  for (const auto& [c, s] : stab) selected[c] = cfg.allow_single_cluster || c != root;
  auto deselect_below = [&](std::size_t c) {
    std::vector<std::size_t> stack(children[c].begin(), children[c].end());
    while (!stack.empty()) {
      const auto x = stack.back();
      stack.pop_back();
      selected[x] = false;
      stack.insert(stack.end(), children[x].begin(), children[x].end());
    }
  };

  if (cfg.selection == ClusterSelection::excess_of_mass) {
    // Children carry larger ids than their parents, so reverse id order is
    // bottom-up.
    for (auto it = stab.rbegin(); it != stab.rend(); ++it) {
      const auto c = it->first;
      if (c == root && !cfg.allow_single_cluster) {
        selected[c] = false;
        continue;
      }
      double subtree = 0.0;
      for (auto ch : children[c]) subtree += stab[ch];
      if (!children[c].empty() && subtree > stab[c]) {
        selected[c] = false;
        stab[c] = subtree;
      } else {
        selected[c] = true;
        deselect_below(c);
      }
    }
  } else {
    for (auto& [c, sel] : selected) sel = children[c].empty() && (c != root || cfg.allow_single_cluster);
  }

  std::map<std::size_t, int> cluster_id;
  for (const auto& [c, sel] : selected) {
    if (sel) cluster_id.emplace(c, static_cast<int>(cluster_id.size()));
  }

  double root_max_lambda = 0.0;
  for (const auto& r : tree) {
    if (r.parent == root) root_max_lambda = std::max(root_max_lambda, r.lambda);
  }
  for (const auto& r : tree) {
    if (r.child >= n) continue;
    std::size_t c = r.parent;
    while (!selected[c] && c != root) c = parent_of.at(c);
    if (!selected[c]) continue;
    if (c == root && r.lambda < root_max_lambda) continue;
    labels[r.child] = cluster_id.at(c);
  }

  std::map<int, std::size_t> sizes;
  for (int l : labels) {
    if (l != kNoise) ++sizes[l];
  }
  std::map<int, int> compact;
  for (const auto& [l, count] : sizes) {
    if (count >= cfg.min_cluster_size) compact.emplace(l, static_cast<int>(compact.size()));
  }
  for (int& l : labels) {
    if (l == kNoise) continue;
    const auto it = compact.find(l);
    l = it == compact.end() ? kNoise : it->second;
  }
  return labels;
}

std::vector<Topic> extract_topics(std::span<const std::string> words, const ClusterLabels& labels,
                                  const KeywordRatings& ratings, TopicScore score) {
  if (words.size() != labels.size()) throw ValidationError("one label per word required");
  std::map<int, std::vector<std::pair<double, std::string>>> members;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (labels[i] == kNoise) continue;
    const auto it = ratings.find(words[i]);
    if (it == ratings.end()) throw ValidationError("word '" + words[i] + "' has no rating");
    members[labels[i]].emplace_back(it->second.kr, words[i]);
  }

  std::vector<Topic> topics;
  for (auto& [label, list] : members) {
    std::sort(list.begin(), list.end(), [](const auto& x, const auto& y) {
      return x.first != y.first ? x.first > y.first : x.second < y.second;
    });
    Topic t;
    t.label = label;
    for (auto& [kr, w] : list) {
      t.score += kr;
      t.keywords.push_back(std::move(w));
    }
    if (score == TopicScore::cluster_size) t.score = static_cast<double>(t.keywords.size());
    topics.push_back(std::move(t));
  }
  std::stable_sort(topics.begin(), topics.end(), [](const Topic& x, const Topic& y) {
    return x.score != y.score ? x.score > y.score : x.label < y.label;
  });
  return topics;
}

std::vector<Topic> top_k_topics(std::span<const Topic> topics, std::size_t k) {
  if (k < 1) throw ConfigError("top-k must be at least 1");
  return {topics.begin(), topics.begin() + static_cast<std::ptrdiff_t>(std::min(k, topics.size()))};
}

}  // namespace topicgraph
