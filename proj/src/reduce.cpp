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


#include "topicgraph/reduce.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <tuple>

#include <Eigen/Dense>

#include "topicgraph/errors.hpp"
#include "topicgraph/random.hpp"

namespace topicgraph {

namespace {

constexpr double kMinScale = 1e-3;
constexpr int kSigmaIterations = 64;
constexpr double kSigmaTolerance = 1e-5;

double clip4(double v) { return std::clamp(v, -4.0, 4.0); }

/// Labels connected components; returns the component count.
std::size_t components(std::size_t n, const std::vector<WeightedEdge>& edges, std::vector<std::size_t>& label) {
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : edges) parent[find(e.a)] = find(e.b);
  label.assign(n, 0);
  std::map<std::size_t, std::size_t> ids;
  for (std::size_t i = 0; i < n; ++i) {
    const auto [it, inserted] = ids.emplace(find(i), ids.size());
    label[i] = it->second;
  }
  return ids.size();
}

/// Eigenvectors 1..dim of the normalized Laplacian, or nothing when the
/// component is too small for a meaningful spectrum.
std::optional<Eigen::MatrixXd> spectral(const std::vector<std::size_t>& members,
                                        const std::vector<WeightedEdge>& edges,
                                        const std::vector<std::size_t>& local, std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(members.size());
  if (members.size() <= dim + 1) return std::nullopt;
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : edges) {
    if (local[e.a] == std::numeric_limits<std::size_t>::max() || local[e.b] == std::numeric_limits<std::size_t>::max()) {
      continue;
    }
    const auto a = static_cast<Eigen::Index>(local[e.a]);
    const auto b = static_cast<Eigen::Index>(local[e.b]);
    w(a, b) = w(b, a) = e.weight;
  }
  Eigen::VectorXd inv_sqrt_deg = w.rowwise().sum();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(inv_sqrt_deg(i) > 0.0)) return std::nullopt;
    inv_sqrt_deg(i) = 1.0 / std::sqrt(inv_sqrt_deg(i));
  }
  const Eigen::MatrixXd laplacian =
      Eigen::MatrixXd::Identity(n, n) - inv_sqrt_deg.asDiagonal() * w * inv_sqrt_deg.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian);
  if (solver.info() != Eigen::Success) return std::nullopt;
  Eigen::MatrixXd vecs = solver.eigenvectors().middleCols(1, static_cast<Eigen::Index>(dim));
  for (Eigen::Index c = 0; c < vecs.cols(); ++c) {
    Eigen::Index arg = 0;
    vecs.col(c).cwiseAbs().maxCoeff(&arg);
    if (vecs(arg, c) < 0) vecs.col(c) *= -1.0;
  }
  if (!vecs.allFinite()) return std::nullopt;
  return vecs;
}

/// Principal-component projection of the component centroids, scaled so the
/// largest coordinate magnitude is 10.
Eigen::MatrixXd centroid_layout(const Matrix& points, const std::vector<std::size_t>& label, std::size_t count,
                                std::size_t dim) {
  const auto cols = static_cast<Eigen::Index>(points.cols());
  Eigen::MatrixXd centroids = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(count), cols);
  std::vector<double> sizes(count, 0.0);
  for (std::size_t i = 0; i < points.rows(); ++i) {
    for (std::size_t j = 0; j < points.cols(); ++j) centroids(static_cast<Eigen::Index>(label[i]), static_cast<Eigen::Index>(j)) += points(i, j);
    sizes[label[i]] += 1.0;
  }
  for (std::size_t c = 0; c < count; ++c) centroids.row(static_cast<Eigen::Index>(c)) /= sizes[c];
  const Eigen::RowVectorXd mean = centroids.colwise().mean();
  const Eigen::MatrixXd centered = centroids.rowwise() - mean;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(cols, static_cast<Eigen::Index>(dim));
  const auto usable = std::min<Eigen::Index>(svd.matrixV().cols(), static_cast<Eigen::Index>(dim));
  basis.leftCols(usable) = svd.matrixV().leftCols(usable);
  for (Eigen::Index c = 0; c < usable; ++c) {
    Eigen::Index arg = 0;
    basis.col(c).cwiseAbs().maxCoeff(&arg);
    if (basis(arg, c) < 0) basis.col(c) *= -1.0;
  }
  Eigen::MatrixXd meta = centered * basis;
  const double extent = meta.cwiseAbs().maxCoeff();
  if (extent > 0.0) meta *= 10.0 / extent;
  return meta;
}

void rescale_to_box(Matrix& layout) {
  for (std::size_t d = 0; d < layout.cols(); ++d) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < layout.rows(); ++i) {
      lo = std::min(lo, layout(i, d));
      hi = std::max(hi, layout(i, d));
    }
    const double span = hi - lo;
    for (std::size_t i = 0; i < layout.rows(); ++i) {
      layout(i, d) = span > 0.0 ? 10.0 * (layout(i, d) - lo) / span : 5.0;
    }
  }
}

}  // namespace

void ReduceConfig::validate(std::size_t points) const {
  if (n_neighbors < 1) throw ConfigError("n_neighbors must be at least 1");
  if (target_dim < 1) throw ConfigError("target_dim must be at least 1");
  if (min_dist < 0.0 || !(spread > 0.0)) throw ConfigError("min_dist must be non-negative and spread positive");
  if (n_epochs < 1) throw ConfigError("n_epochs must be at least 1");
  if (points < n_neighbors + 1) {
    throw SizeError("need at least " + std::to_string(n_neighbors + 1) + " points, got " + std::to_string(points));
  }
}

NeighborLists knn_graph(const Matrix& points, std::size_t n_neighbors) {
  const std::size_t n = points.rows();
  if (n_neighbors < 1) throw ConfigError("n_neighbors must be at least 1");
  if (n < n_neighbors + 1) {
    throw SizeError("need at least " + std::to_string(n_neighbors + 1) + " points, got " + std::to_string(n));
  }

  NeighborLists out(n);
  std::vector<std::pair<double, std::size_t>> candidates;
  double global_mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    candidates.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) candidates.emplace_back(std::sqrt(squared_distance(points.row(i), points.row(j))), j);
    }
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(n_neighbors),
                      candidates.end());
    for (std::size_t k = 0; k < n_neighbors; ++k) {
      out[i].push_back({candidates[k].second, candidates[k].first, 0.0});
      global_mean += candidates[k].first;
    }
  }
  global_mean /= static_cast<double>(n * n_neighbors);

  const double target = std::log2(static_cast<double>(n_neighbors));
  for (auto& row : out) {
    const double rho = row.front().distance;
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    double sigma = 1.0;
    for (int it = 0; it < kSigmaIterations; ++it) {
      double sum = 0.0;
      for (const auto& nb : row) sum += std::exp(-std::max(0.0, nb.distance - rho) / sigma);
      if (std::abs(sum - target) < kSigmaTolerance) break;
      if (sum > target) {
        hi = sigma;
        sigma = (lo + hi) / 2.0;
      } else {
        lo = sigma;
        sigma = std::isinf(hi) ? sigma * 2.0 : (lo + hi) / 2.0;
      }
    }
    double mean = 0.0;
    for (const auto& nb : row) mean += nb.distance;
    mean /= static_cast<double>(row.size());
    sigma = std::max(sigma, kMinScale * (rho > 0.0 ? mean : global_mean));
    for (auto& nb : row) {
      const double m = sigma > 0.0 ? std::exp(-std::max(0.0, nb.distance - rho) / sigma) : (nb.distance <= rho ? 1.0 : 0.0);
      // Underflow must not erase a listed neighbor.
      nb.membership = std::max(m, std::numeric_limits<double>::min());
    }
  }
  return out;
}

std::vector<WeightedEdge> symmetrize(const NeighborLists& neighbors) {
  std::map<std::pair<std::size_t, std::size_t>, double> directed;
  for (std::size_t i = 0; i < neighbors.size(); ++i) {
    for (const auto& nb : neighbors[i]) directed[{i, nb.index}] = nb.membership;
  }
  std::vector<WeightedEdge> edges;
  for (const auto& [key, w] : directed) {
    const auto [i, j] = key;
    const auto back = directed.find({j, i});
    if (back != directed.end() && j < i) continue;  // emitted from the other side
    const double v = back == directed.end() ? 0.0 : back->second;
    edges.push_back({std::min(i, j), std::max(i, j), w + v - w * v});
  }
  std::sort(edges.begin(), edges.end(), [](const auto& x, const auto& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
  return edges;
}

CurveParams fit_curve(double spread, double min_dist) {
  constexpr int kSamples = 300;
  std::vector<double> xs(kSamples);
  std::vector<double> ys(kSamples);
  for (int i = 0; i < kSamples; ++i) {
    xs[i] = 3.0 * spread * i / (kSamples - 1);
    ys[i] = xs[i] < min_dist ? 1.0 : std::exp(-(xs[i] - min_dist) / spread);
  }
  auto residual_sum = [&](double a, double b) {
    double s = 0.0;
    for (int i = 0; i < kSamples; ++i) {
      const double r = 1.0 / (1.0 + a * std::pow(xs[i], 2.0 * b)) - ys[i];
      s += r * r;
    }
    return s;
  };

  // Levenberg-Marquardt on (a, b) starting from (1, 1).
  double a = 1.0;
  double b = 1.0;
  double lambda = 1e-3;
  double cost = residual_sum(a, b);
  for (int iter = 0; iter < 500; ++iter) {
    Eigen::Matrix2d jtj = Eigen::Matrix2d::Zero();
    Eigen::Vector2d jtr = Eigen::Vector2d::Zero();
    for (int i = 0; i < kSamples; ++i) {
      const double x = xs[i];
      const double xp = x > 0.0 ? std::pow(x, 2.0 * b) : 0.0;
      const double denom = 1.0 + a * xp;
      const double f = 1.0 / denom;
      const double r = f - ys[i];
      const double da = -xp / (denom * denom);
      const double db = x > 0.0 ? -a * xp * 2.0 * std::log(x) / (denom * denom) : 0.0;
      const Eigen::Vector2d g(da, db);
      jtj += g * g.transpose();
      jtr += g * r;
    }
    bool improved = false;
    for (int tries = 0; tries < 50 && !improved; ++tries) {
      Eigen::Matrix2d damped = jtj;
      damped.diagonal() *= 1.0 + lambda;
      const Eigen::Vector2d step = damped.ldlt().solve(-jtr);
      const double na = a + step(0);
      const double nb = b + step(1);
      const double ncost = residual_sum(na, nb);
      if (std::isfinite(ncost) && ncost < cost) {
        const bool converged = cost - ncost < 1e-15 * std::max(1.0, cost);
        a = na;
        b = nb;
        cost = ncost;
        lambda = std::max(lambda / 10.0, 1e-12);
        improved = true;
        if (converged) return {a, b};
      } else {
        lambda *= 10.0;
      }
    }
    if (!improved) break;
  }
  return {a, b};
}

Matrix initial_layout(const Matrix& points, const std::vector<WeightedEdge>& graph, std::size_t target_dim,
                      std::uint64_t seed) {
  const std::size_t n = points.rows();
  Matrix layout(n, target_dim);
  Rng rng(derive_seed(seed, "layout-init", 0));

  std::vector<std::size_t> label;
  const std::size_t count = components(n, graph, label);
  const Eigen::MatrixXd meta = count > 1 ? centroid_layout(points, label, count, target_dim)
                                         : Eigen::MatrixXd::Zero(1, static_cast<Eigen::Index>(target_dim));

  bool any_spectral = false;
  for (std::size_t c = 0; c < count; ++c) {
    std::vector<std::size_t> members;
    std::vector<std::size_t> local(n, std::numeric_limits<std::size_t>::max());
    for (std::size_t i = 0; i < n; ++i) {
      if (label[i] == c) {
        local[i] = members.size();
        members.push_back(i);
      }
    }
    // Half the gap to the nearest other component keeps components apart.
    double radius = 10.0;
    if (count > 1) {
      radius = std::numeric_limits<double>::infinity();
      for (std::size_t o = 0; o < count; ++o) {
        if (o == c) continue;
        const double d = (meta.row(static_cast<Eigen::Index>(o)) - meta.row(static_cast<Eigen::Index>(c))).norm();
        if (d > 0.0) radius = std::min(radius, d / 2.0);
      }
      if (!std::isfinite(radius)) radius = 1.0;
    }
    const auto centre = meta.row(static_cast<Eigen::Index>(count > 1 ? c : 0));

    const auto vecs = spectral(members, graph, local, target_dim);
    if (vecs) {
      any_spectral = true;
      const double extent = vecs->cwiseAbs().maxCoeff();
      const double scale = extent > 0.0 ? radius / extent : 0.0;
      for (std::size_t k = 0; k < members.size(); ++k) {
        for (std::size_t d = 0; d < target_dim; ++d) {
          layout(members[k], d) = (*vecs)(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d)) * scale +
                                  centre(static_cast<Eigen::Index>(d));
        }
      }
    } else {
      for (std::size_t i : members) {
        for (std::size_t d = 0; d < target_dim; ++d) {
          layout(i, d) = (uniform01(rng) * 2.0 - 1.0) * radius + centre(static_cast<Eigen::Index>(d));
        }
      }
    }
  }
  if (count == 1 && !any_spectral) {
    for (double& v : layout.data()) v = uniform01(rng) * 20.0 - 10.0;
  }
  rescale_to_box(layout);
  return layout;
}

Matrix reduce(const Matrix& points, const ReduceConfig& cfg) {
  cfg.validate(points.rows());
  const auto neighbors = knn_graph(points, cfg.n_neighbors);
  auto graph = symmetrize(neighbors);
  Matrix layout = initial_layout(points, graph, cfg.target_dim, cfg.seed);
  const auto [a, b] = fit_curve(cfg.spread, cfg.min_dist);

  double max_w = 0.0;
  for (const auto& e : graph) max_w = std::max(max_w, e.weight);
  const double epochs = static_cast<double>(cfg.n_epochs);
  std::erase_if(graph, [&](const WeightedEdge& e) { return e.weight < max_w / epochs; });

  // Both orientations of each edge take part, as heads and as tails.
  struct Sample {
    std::size_t head;
    std::size_t tail;
    double every;
    double next;
    double every_negative;
    double next_negative;
  };
  std::vector<Sample> samples;
  for (const auto& e : graph) {
    const double every = epochs / (epochs * e.weight / max_w);
    const double neg = every / static_cast<double>(cfg.negative_sample_rate);
    samples.push_back({e.a, e.b, every, every, neg, neg});
    samples.push_back({e.b, e.a, every, every, neg, neg});
  }

  Rng rng(derive_seed(cfg.seed, "layout-sgd", 0));
  const std::size_t n = layout.rows();
  const std::size_t dim = layout.cols();
  for (std::size_t epoch = 0; epoch < cfg.n_epochs; ++epoch) {
    const double alpha = cfg.learning_rate * (1.0 - static_cast<double>(epoch) / epochs);
    const double now = static_cast<double>(epoch);
    for (auto& s : samples) {
      if (s.next > now) continue;
      auto head = layout.row(s.head);
      auto tail = layout.row(s.tail);
      const double d2 = squared_distance(head, tail);
      if (d2 > 0.0) {
        const double coeff = -2.0 * a * b * std::pow(d2, b - 1.0) / (a * std::pow(d2, b) + 1.0);
        for (std::size_t d = 0; d < dim; ++d) {
          const double g = clip4(coeff * (head[d] - tail[d]));
          head[d] += g * alpha;
          tail[d] -= g * alpha;
        }
      }
      s.next += s.every;

      const auto n_neg = static_cast<std::size_t>(std::max(0.0, (now - s.next_negative) / s.every_negative));
      for (std::size_t k = 0; k < n_neg; ++k) {
        const auto other = uniform_index(rng, n);
        if (other == s.head) continue;
        auto far = layout.row(other);
        const double dn = squared_distance(head, far);
        if (dn > 0.0) {
          const double coeff = 2.0 * cfg.repulsion_strength * b / ((0.001 + dn) * (a * std::pow(dn, b) + 1.0));
          for (std::size_t d = 0; d < dim; ++d) head[d] += clip4(coeff * (head[d] - far[d])) * alpha;
        } else {
          for (std::size_t d = 0; d < dim; ++d) head[d] += 4.0 * alpha;
        }
      }
      s.next_negative += static_cast<double>(n_neg) * s.every_negative;
    }
  }
  return layout;
}

}  // namespace topicgraph
