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


#include "topicgraph/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "topicgraph/errors.hpp"

namespace topicgraph {

namespace {

double x_log_x(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

FsPart weighted_rows(const Matrix& mass, const char* what) {
  FsPart part;
  double all = 0.0;
  std::vector<double> row_mass(mass.rows(), 0.0);
  for (std::size_t r = 0; r < mass.rows(); ++r) {
    for (double v : mass.row(r)) row_mass[r] += v;
    if (!(row_mass[r] > 0.0)) throw DomainError(std::string(what) + " " + std::to_string(r) + " has no score mass");
    part.per_item.push_back(fs_score(mass.row(r)));
    all += row_mass[r];
  }
  for (std::size_t r = 0; r < mass.rows(); ++r) part.total += part.per_item[r] * row_mass[r] / all;
  return part;
}

Matrix transpose(const Matrix& m) {
  Matrix t(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  }
  return t;
}

}  // namespace

void MultiAssignment::validate() const {
  if (class_scores.rows() != cluster_scores.rows()) throw ValidationError("class and cluster rows differ");
  for (std::size_t k = 0; k < samples(); ++k) {
    bool has_class = false;
    bool has_cluster = false;
    for (double v : class_scores.row(k)) {
      if (!std::isfinite(v) || v < 0.0) throw ValidationError("class scores must be finite and non-negative");
      has_class |= v > 0.0;
    }
    for (double v : cluster_scores.row(k)) {
      if (!std::isfinite(v) || v < 0.0) throw ValidationError("cluster scores must be finite and non-negative");
      has_cluster |= v > 0.0;
    }
    if (!has_class || !has_cluster) {
      throw ValidationError("sample " + std::to_string(k) + " lacks a class or a cluster");
    }
  }
}

Matrix cluster_class_mass(const MultiAssignment& a) {
  Matrix mass(a.classes(), a.clusters());
  for (std::size_t k = 0; k < a.samples(); ++k) {
    for (std::size_t j = 0; j < a.clusters(); ++j) {
      if (!(a.cluster_scores(k, j) > 0.0)) continue;
      for (std::size_t i = 0; i < a.classes(); ++i) mass(i, j) += a.class_scores(k, i);
    }
  }
  return mass;
}

Matrix class_cluster_mass(const MultiAssignment& a) { return transpose(cluster_class_mass(a.transposed())); }

double fs_score(std::span<const double> masses) {
  double total = 0.0;
  double weighted = 0.0;
  for (double s : masses) {
    total += s;
    weighted += x_log_x(s);
  }
  if (!(total > 0.0)) throw DomainError("FS score of zero mass");
  // Non-negative in exact arithmetic; rounding can leave -1 ulp.
  return std::max(0.0, std::log(total) - weighted / total);
}

FsPart fs_cluster(const MultiAssignment& a) {
  a.validate();
  return weighted_rows(transpose(cluster_class_mass(a)), "cluster");
}

FsPart fs_class(const MultiAssignment& a) {
  a.validate();
  return weighted_rows(class_cluster_mass(a), "class");
}

double fs_total(double cluster_total, double class_total, double w_omega, double w_c) {
  if (w_omega < 0.0 || w_c < 0.0 || !(w_omega + w_c > 0.0)) throw DomainError("FS weights must be non-negative with a positive sum");
  return (w_omega * cluster_total + w_c * class_total) / (w_omega + w_c);
}

FsReport evaluate_fs(const MultiAssignment& a, double w_omega, double w_c) {
  FsReport r;
  r.cluster = fs_cluster(a);
  r.cls = fs_class(a);
  r.total = fs_total(r.cluster.total, r.cls.total, w_omega, w_c);
  r.w_omega = w_omega;
  r.w_c = w_c;
  return r;
}

std::optional<MultiAssignment> topic_assignment(std::span<const Topic> detected,
                                                std::span<const GroundTruthTopic> truth) {
  std::map<std::string, std::vector<std::size_t>> in_truth;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    for (const auto& w : std::set<std::string>(truth[i].keywords.begin(), truth[i].keywords.end())) in_truth[w].push_back(i);
  }
  std::map<std::string, std::vector<std::size_t>> in_detected;
  std::vector<std::size_t> used_clusters;
  for (std::size_t j = 0; j < detected.size(); ++j) {
    bool used = false;
    for (const auto& w : detected[j].keywords) {
      if (!in_truth.contains(w)) continue;
      auto& list = in_detected[w];
      if (list.empty() || list.back() != used_clusters.size()) list.push_back(used_clusters.size());
      used = true;
    }
    if (used) used_clusters.push_back(j);
  }
  if (in_detected.empty()) return std::nullopt;

  MultiAssignment a{Matrix(in_detected.size(), truth.size()), Matrix(in_detected.size(), used_clusters.size())};
  std::size_t k = 0;
  for (const auto& [word, clusters] : in_detected) {
    for (auto i : in_truth.at(word)) a.class_scores(k, i) = 1.0;
    for (auto j : clusters) a.cluster_scores(k, j) = 1.0;
    ++k;
  }
  // Ground-truth topics without a shared word carry no mass.
  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    for (std::size_t s = 0; s < a.samples(); ++s) {
      if (a.class_scores(s, i) > 0.0) {
        live.push_back(i);
        break;
      }
    }
  }
  if (live.size() != truth.size()) {
    Matrix compact(a.samples(), live.size());
    for (std::size_t s = 0; s < a.samples(); ++s) {
      for (std::size_t c = 0; c < live.size(); ++c) compact(s, c) = a.class_scores(s, live[c]);
    }
    a.class_scores = std::move(compact);
  }
  return a;
}

double topic_overlap(const std::vector<std::string>& detected, const std::vector<std::string>& truth) {
  const std::set<std::string> t(truth.begin(), truth.end());
  if (t.empty()) return 0.0;
  const std::set<std::string> d(detected.begin(), detected.end());
  std::size_t shared = 0;
  for (const auto& w : t) shared += d.contains(w) ? 1 : 0;
  return static_cast<double>(shared) / static_cast<double>(t.size());
}

TopicMatching match_topics(std::span<const Topic> detected, std::span<const GroundTruthTopic> truth,
                           double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) throw ConfigError("overlap threshold must lie in (0, 1]");
  std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
  for (std::size_t d = 0; d < detected.size(); ++d) {
    for (std::size_t t = 0; t < truth.size(); ++t) {
      const double o = topic_overlap(detected[d].keywords, truth[t].keywords);
      if (o >= threshold) candidates.emplace_back(o, d, t);
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const auto& x, const auto& y) {
    if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) > std::get<0>(y);
    return std::tie(std::get<1>(x), std::get<2>(x)) < std::tie(std::get<1>(y), std::get<2>(y));
  });
  std::vector<bool> used_d(detected.size(), false);
  std::vector<bool> used_t(truth.size(), false);
  TopicMatching out;
  for (const auto& [o, d, t] : candidates) {
    if (used_d[d] || used_t[t]) continue;
    used_d[d] = used_t[t] = true;
    out.emplace_back(d, t);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double f1_score(double precision, double recall) {
  const double s = precision + recall;
  return s > 0.0 ? 2.0 * precision * recall / s : 0.0;
}

TopicEvalReport topic_scores(std::size_t matched, std::size_t detected, std::size_t gt_detected,
                             std::size_t gt_total) {
  if (gt_total == 0) throw DomainError("recall is undefined without ground-truth topics");
  if (matched > detected || gt_detected > gt_total) throw DomainError("matched counts exceed their totals");
  TopicEvalReport r;
  r.precision = detected == 0 ? 0.0 : static_cast<double>(matched) / static_cast<double>(detected);
  r.recall = static_cast<double>(gt_detected) / static_cast<double>(gt_total);
  r.f1 = f1_score(r.precision, r.recall);
  return r;
}

}  // namespace topicgraph
