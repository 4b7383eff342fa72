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
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "topicgraph/cluster.hpp"
#include "topicgraph/corpus.hpp"
#include "topicgraph/matrix.hpp"

namespace topicgraph {

/// Samples softly assigned to several true classes and several clusters.
/// Row k of `class_scores` / `cluster_scores` holds sample k's scores.
struct MultiAssignment {
  Matrix class_scores;    // samples x classes
  Matrix cluster_scores;  // samples x clusters

  std::size_t samples() const noexcept { return class_scores.rows(); }
  std::size_t classes() const noexcept { return class_scores.cols(); }
  std::size_t clusters() const noexcept { return cluster_scores.cols(); }

  /// Finite, non-negative scores; every sample in at least one class and one
  /// cluster. Throws ValidationError.
  void validate() const;

  /// Classes and clusters swapped.
  MultiAssignment transposed() const { return {cluster_scores, class_scores}; }
};

/// Sr(i, j): class-i scores of the samples that belong to cluster j.
Matrix cluster_class_mass(const MultiAssignment& a);
/// Ss(i, j): cluster-j scores of the samples that belong to class i.
Matrix class_cluster_mass(const MultiAssignment& a);

/// log(S) - (1/S) * sum s log s over a row of masses with S = sum s, using
/// 0 log 0 = 0. Throws DomainError when S is zero.
double fs_score(std::span<const double> masses);

struct FsPart {
  std::vector<double> per_item;
  double total = 0.0;
};

/// Per-cluster score and the mass-weighted total over clusters.
FsPart fs_cluster(const MultiAssignment& a);
/// Per-class score and the mass-weighted total over classes.
FsPart fs_class(const MultiAssignment& a);
/// (w_omega * cluster + w_c * class) / (w_omega + w_c).
double fs_total(double cluster_total, double class_total, double w_omega = 1.0, double w_c = 1.0);

struct FsReport {
  FsPart cluster;
  FsPart cls;
  double total = 0.0;
  double w_omega = 1.0;
  double w_c = 1.0;
};
FsReport evaluate_fs(const MultiAssignment& a, double w_omega = 1.0, double w_c = 1.0);

/// Unit-score assignment over the words that occur both in some detected
/// topic and in some ground-truth topic; detected topics with no such word
/// are dropped. Nullopt when no word is shared.
std::optional<MultiAssignment> topic_assignment(std::span<const Topic> detected,
                                                std::span<const GroundTruthTopic> truth);

/// (detected index, truth index) pairs.
using TopicMatching = std::vector<std::pair<std::size_t, std::size_t>>;

/// |d & t| / |t|.
double topic_overlap(const std::vector<std::string>& detected, const std::vector<std::string>& truth);

/// Greedy one-to-one matching in descending overlap order (ties by detected
/// then truth index); a pair qualifies when its overlap reaches `threshold`.
TopicMatching match_topics(std::span<const Topic> detected, std::span<const GroundTruthTopic> truth,
                           double threshold = 0.5);

struct TopicEvalReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  TopicMatching matches;
};

/// precision = matched / detected (0 when nothing was detected),
/// recall = gt_detected / gt_total, f1 their harmonic mean (0 when both are 0).
TopicEvalReport topic_scores(std::size_t matched, std::size_t detected, std::size_t gt_detected,
                             std::size_t gt_total);

/// F1 from precision and recall.
double f1_score(double precision, double recall);

}  // namespace topicgraph
