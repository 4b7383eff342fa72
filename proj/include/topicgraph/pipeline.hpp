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
#include <string>
#include <vector>

#include "topicgraph/cluster.hpp"
#include "topicgraph/config.hpp"
#include "topicgraph/cooc.hpp"
#include "topicgraph/corpus.hpp"
#include "topicgraph/eval.hpp"
#include "topicgraph/hwa.hpp"
#include "topicgraph/matrix.hpp"
#include "topicgraph/tokenize.hpp"

namespace topicgraph {

std::string_view library_version();

// Single phases, usable on persisted predecessors. Seeds are derived from
// (cfg.seed, phase name, window index).

CoocGraph run_cooc_phase(const Batch& batch, const StopwordSet& stopwords, const PipelineConfig& cfg);

struct KeywordGraph {
  KeywordRatings ratings;  // every word of the window
  std::vector<std::string> keywords;
  AgfGraph graph;
};
KeywordGraph run_hwa_phase(const CoocGraph& graph, const PipelineConfig& cfg);

NodeVectors run_embed_phase(const AgfGraph& graph, const PipelineConfig& cfg);
NodeVectors run_reduce_phase(const NodeVectors& embedding, const PipelineConfig& cfg, std::int64_t window);

struct Clustering {
  ClusterLabels labels;
  std::vector<std::string> warnings;
};
Clustering run_cluster_phase(const NodeVectors& points, const PipelineConfig& cfg, std::int64_t window);

/// Ratings as stored on the AGF graph nodes.
KeywordRatings graph_ratings(const AgfGraph& graph);

struct PhaseTiming {
  std::string phase;
  double seconds = 0.0;
};

struct WindowResult {
  std::int64_t window = 0;
  Timestamp start = 0;
  Timestamp end = 0;
  std::size_t posts = 0;
  std::size_t vocabulary = 0;
  std::size_t keywords = 0;
  std::vector<Topic> topics;  // top-k, ranked
  std::vector<std::string> warnings;
  std::optional<std::string> error;
  std::map<std::string, std::string> artifacts;  // relative to the output directory
  std::vector<PhaseTiming> timings;
};

/// Runs every phase on one window. Intermediates go to `intermediates`
/// when set. Phase failures propagate as exceptions.
WindowResult process_window(const Batch& batch, const StopwordSet& stopwords, const PipelineConfig& cfg,
                            const std::optional<std::filesystem::path>& intermediates = std::nullopt);

struct RunManifest {
  std::string version;
  std::string config;  // dump_config text
  std::vector<WindowResult> windows;
  bool all_ok() const;
};

/// Topic report text for one window.
std::string topic_report_json(std::int64_t window, std::span<const Topic> topics);
std::vector<Topic> parse_topic_report(std::istream& in, std::int64_t* window = nullptr);

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);
RunManifest read_manifest(const std::filesystem::path& path);

/// Loads posts, splits windows, processes them (cfg.jobs in parallel) and
/// writes `topics/window_NNNN.json`, `manifest.json` and, with a ground
/// truth path, `evaluation.json` under cfg.out.
RunManifest run_pipeline(const PipelineConfig& cfg);

struct WindowEvaluation {
  std::int64_t window = 0;
  std::optional<FsReport> fs;  // absent when no detected keyword is in the ground truth
  TopicEvalReport topic;
  std::size_t detected = 0;
  std::size_t gt_topics = 0;
};

struct EvaluationSummary {
  std::vector<WindowEvaluation> windows;
  std::vector<std::int64_t> skipped;      // ground-truth windows missing from the run
  std::vector<std::int64_t> unevaluated;  // run windows without ground truth
};

EvaluationSummary evaluate_windows(const std::map<std::int64_t, std::vector<Topic>>& detected,
                                   std::span<const GroundTruth> truth, double match_threshold = 0.5,
                                   double w_omega = 1.0, double w_c = 1.0);

std::string evaluation_json(const EvaluationSummary& summary);

/// Reads the topic reports listed in the manifest under `run_dir` and
/// scores them; writes `evaluation.json` there.
EvaluationSummary evaluate_run(const std::filesystem::path& run_dir, const std::filesystem::path& gt_path,
                               double match_threshold = 0.5, double w_omega = 1.0, double w_c = 1.0);

}  // namespace topicgraph
