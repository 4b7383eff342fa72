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


#include "topicgraph/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "topicgraph/embed.hpp"
#include "topicgraph/errors.hpp"
#include "topicgraph/random.hpp"
#include "topicgraph/reduce.hpp"

#ifndef TOPICGRAPH_VERSION
#define TOPICGRAPH_VERSION "0.0.0"
#endif

namespace topicgraph {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::uint64_t phase_seed(const PipelineConfig& cfg, std::string_view phase, std::int64_t window) {
  return derive_seed(cfg.seed, phase, static_cast<std::uint64_t>(window));
}

class PhaseClock {
 public:
  explicit PhaseClock(std::vector<PhaseTiming>& out) : out_(out) {}
  template <typename Fn>
  auto operator()(const char* phase, Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    auto result = fn();
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    out_.push_back({phase, dt.count()});
    return result;
  }

 private:
  std::vector<PhaseTiming>& out_;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

void write_labels(const std::vector<std::string>& words, const ClusterLabels& labels, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  for (std::size_t i = 0; i < words.size(); ++i) out << words[i] << '\t' << labels[i] << '\n';
}

std::string window_name(std::int64_t window) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "window_%04lld.json", static_cast<long long>(window));
  return buf;
}

}  // namespace

std::string_view library_version() { return TOPICGRAPH_VERSION; }

CoocGraph run_cooc_phase(const Batch& batch, const StopwordSet& stopwords, const PipelineConfig& cfg) {
  std::vector<ProcessedPost> posts;
  posts.reserve(batch.posts.size());
  for (const auto& p : batch.posts) {
    auto processed = preprocess(p.text, stopwords);
    if (processed.words.empty() && !cfg.count_empty_posts) continue;
    posts.push_back(std::move(processed));
  }
  auto graph = build_batch_graph(posts);
  graph.set_window(batch.index);
  return graph;
}

KeywordGraph run_hwa_phase(const CoocGraph& graph, const PipelineConfig& cfg) {
  KeywordGraph out;
  out.ratings = keyword_rating(graph);
  if (!out.ratings.empty()) out.keywords = select_keywords(out.ratings, cfg.h);
  out.graph = build_agf_graph(graph, out.keywords, out.ratings, cfg.delta);
  out.graph.set_window(graph.window());
  return out;
}

NodeVectors run_embed_phase(const AgfGraph& graph, const PipelineConfig& cfg) {
  WalkConfig walk = cfg.effective_walk();
  walk.seed = phase_seed(cfg, "walk", graph.window());
  TrainConfig train = cfg.train;
  train.seed = phase_seed(cfg, "train", graph.window());
  const auto walks = generate_walks(graph, walk);
  return {graph.words(), train_skipgram(walks, graph.size(), train)};
}

NodeVectors run_reduce_phase(const NodeVectors& embedding, const PipelineConfig& cfg, std::int64_t window) {
  ReduceConfig r = cfg.reduce;
  r.seed = phase_seed(cfg, "reduce", window);
  return {embedding.words, reduce(embedding.values, r)};
}

Clustering run_cluster_phase(const NodeVectors& points, const PipelineConfig& cfg, std::int64_t window) {
  Clustering out;
  const std::size_t n = points.values.rows();
  if (cfg.clustering == ClusteringMethod::kmeans) {
    std::size_t k = cfg.n_clusters;
    if (k > n) {
      out.warnings.push_back("n_clusters " + std::to_string(k) + " exceeds " + std::to_string(n) +
                             " keywords; using " + std::to_string(n));
      k = n;
    }
    out.labels = kmeans(points.values, k, cfg.max_iter, phase_seed(cfg, "cluster", window)).labels;
  } else {
    if (n < cfg.hdbscan.min_cluster_size) {
      out.warnings.push_back("only " + std::to_string(n) + " keywords, fewer than min_cluster_size");
    }
    out.labels = hdbscan(points.values, cfg.hdbscan);
  }
  return out;
}

KeywordRatings graph_ratings(const AgfGraph& graph) {
  KeywordRatings r;
  for (std::size_t i = 0; i < graph.size(); ++i) r[graph.word(i)] = {graph.rating(i), 0};
  return r;
}

WindowResult process_window(const Batch& batch, const StopwordSet& stopwords, const PipelineConfig& cfg,
                            const std::optional<fs::path>& intermediates) {
  WindowResult res;
  res.window = batch.index;
  res.start = batch.start;
  res.end = batch.end;
  res.posts = batch.posts.size();
  PhaseClock clock(res.timings);
  if (intermediates) fs::create_directories(*intermediates);
  auto keep = [&](const std::string& name, const std::string& file) {
    const auto path = *intermediates / file;
    res.artifacts[name] = path.string();
    return path;
  };

  if (batch.posts.empty()) {
    res.warnings.push_back("empty window");
    return res;
  }

  const auto cooc = clock("cooc", [&] { return run_cooc_phase(batch, stopwords, cfg); });
  res.vocabulary = cooc.nodes().size();
  if (intermediates) {
    write_cooc_graph(cooc, keep("cooc", "cooc"));
    res.artifacts["cooc"] += ".{nodes,edges}.tsv";
  }

  const auto kg = clock("hwa", [&] { return run_hwa_phase(cooc, cfg); });
  res.keywords = kg.keywords.size();
  if (intermediates) {
    write_agf_graph(kg.graph, keep("agf", "agf"));
    res.artifacts["agf"] += ".{nodes,edges}.tsv";
  }
  const auto ratings = graph_ratings(kg.graph);
  const auto& words = kg.graph.words();

  if (words.size() < 2) {
    res.warnings.push_back(std::to_string(words.size()) + " keyword(s); too few to embed and cluster");
    if (!words.empty()) res.topics = extract_topics(words, ClusterLabels(words.size(), 0), ratings, cfg.topic_score);
    return res;
  }

  const auto embedding = clock("embed", [&] { return run_embed_phase(kg.graph, cfg); });
  if (intermediates) write_node_vectors(embedding, keep("embedding", "embedding.tsv"), true);

  ClusterLabels labels;
  if (words.size() < cfg.reduce.n_neighbors + 1) {
    res.warnings.push_back(std::to_string(words.size()) + " keywords, fewer than n_neighbors + 1; one topic");
    labels.assign(words.size(), 0);
  } else {
    const auto reduced = clock("reduce", [&] { return run_reduce_phase(embedding, cfg, batch.index); });
    if (intermediates) write_node_vectors(reduced, keep("reduced", "reduced.tsv"), false);
    auto clustering = clock("cluster", [&] { return run_cluster_phase(reduced, cfg, batch.index); });
    res.warnings.insert(res.warnings.end(), clustering.warnings.begin(), clustering.warnings.end());
    labels = std::move(clustering.labels);
  }
  if (intermediates) write_labels(words, labels, keep("labels", "labels.tsv"));

  const auto topics = extract_topics(words, labels, ratings, cfg.topic_score);
  if (topics.empty()) res.warnings.push_back("no clusters found");
  res.topics = top_k_topics(topics, cfg.top_k);
  return res;
}

bool RunManifest::all_ok() const {
  return std::none_of(windows.begin(), windows.end(), [](const auto& w) { return w.error.has_value(); });
}

std::string topic_report_json(std::int64_t window, std::span<const Topic> topics) {
  json doc;
  doc["window"] = window;
  doc["topics"] = json::array();
  for (std::size_t i = 0; i < topics.size(); ++i) {
    json t;
    t["rank"] = i + 1;
    t["score"] = topics[i].score;
    t["keywords"] = topics[i].keywords;
    doc["topics"].push_back(std::move(t));
  }
  return doc.dump(2) + "\n";
}

std::vector<Topic> parse_topic_report(std::istream& in, std::int64_t* window) {
  std::vector<Topic> topics;
  try {
    const auto doc = json::parse(in);
    if (window) *window = doc.at("window").get<std::int64_t>();
    for (const auto& t : doc.at("topics")) {
      Topic topic;
      topic.score = t.at("score").get<double>();
      topic.keywords = t.at("keywords").get<std::vector<std::string>>();
      topic.label = static_cast<int>(topics.size());
      topics.push_back(std::move(topic));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("topic report: ") + e.what(), 0);
  }
  return topics;
}

void write_manifest(const RunManifest& manifest, const fs::path& path) {
  json doc;
  doc["version"] = manifest.version;
  doc["status"] = manifest.all_ok() ? "ok" : "partial";
  doc["config"] = manifest.config;
  doc["windows"] = json::array();
  for (const auto& w : manifest.windows) {
    json j;
    j["window"] = w.window;
    j["start"] = w.start;
    j["end"] = w.end;
    j["posts"] = w.posts;
    j["vocabulary"] = w.vocabulary;
    j["keywords"] = w.keywords;
    j["topics"] = w.topics.size();
    j["artifacts"] = w.artifacts;
    j["timings"] = json::object();
    for (const auto& t : w.timings) j["timings"][t.phase] = t.seconds;
    j["warnings"] = w.warnings;
    j["error"] = w.error ? json(*w.error) : json(nullptr);
    doc["windows"].push_back(std::move(j));
  }
  write_text(path, doc.dump(2) + "\n");
}

RunManifest read_manifest(const fs::path& path) {
  const auto doc = read_json(path);
  RunManifest m;
  try {
    m.version = doc.at("version").get<std::string>();
    m.config = doc.at("config").get<std::string>();
    for (const auto& j : doc.at("windows")) {
      WindowResult w;
      w.window = j.at("window").get<std::int64_t>();
      w.start = j.at("start").get<Timestamp>();
      w.end = j.at("end").get<Timestamp>();
      w.posts = j.at("posts").get<std::size_t>();
      w.vocabulary = j.at("vocabulary").get<std::size_t>();
      w.keywords = j.at("keywords").get<std::size_t>();
      w.artifacts = j.at("artifacts").get<std::map<std::string, std::string>>();
      for (const auto& [phase, secs] : j.at("timings").items()) w.timings.push_back({phase, secs.get<double>()});
      w.warnings = j.at("warnings").get<std::vector<std::string>>();
      if (!j.at("error").is_null()) w.error = j.at("error").get<std::string>();
      m.windows.push_back(std::move(w));
    }
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
  return m;
}

RunManifest run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  if (cfg.out.empty()) throw ConfigError("no output directory");
  const auto posts = load_posts(cfg.input);
  const auto stopwords = cfg.stopwords.empty() ? StopwordSet{} : load_stopwords(cfg.stopwords);
  const auto all = cfg.origin ? window_posts(posts, cfg.window_seconds, *cfg.origin)
                              : window_posts(posts, cfg.window_seconds);

  std::vector<Batch> batches;
  if (cfg.windows.empty()) {
    batches = all;
  } else {
    Timestamp origin = cfg.origin.value_or(0);
    if (!cfg.origin && !all.empty()) origin = all.front().start - all.front().index * cfg.window_seconds;
    for (const auto idx : std::set<std::int64_t>(cfg.windows.begin(), cfg.windows.end())) {
      const auto it = std::find_if(all.begin(), all.end(), [&](const Batch& b) { return b.index == idx; });
      if (it != all.end()) {
        batches.push_back(*it);
      } else {
        Batch b;
        b.index = idx;
        b.start = origin + idx * cfg.window_seconds;
        b.end = b.start + cfg.window_seconds;
        batches.push_back(std::move(b));
      }
    }
  }

  fs::create_directories(cfg.out / "topics");
  RunManifest manifest;
  manifest.version = std::string(library_version());
  manifest.config = dump_config(cfg);
  manifest.windows.resize(batches.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < batches.size(); i = next++) {
      const auto& batch = batches[i];
      WindowResult res;
      try {
        std::optional<fs::path> dir;
        if (cfg.keep_intermediates) dir = cfg.out / "windows" / std::to_string(batch.index);
        res = process_window(batch, stopwords, cfg, dir);
        const auto report = fs::path("topics") / window_name(batch.index);
        write_text(cfg.out / report, topic_report_json(batch.index, res.topics));
        res.artifacts["topics"] = report.string();
        for (auto& [name, path] : res.artifacts) {
          const auto rel = fs::path(path).lexically_relative(cfg.out);
          if (!rel.empty()) path = rel.string();
        }
      } catch (const std::exception& e) {
        res = WindowResult{};
        res.error = e.what();
      }
      res.window = batch.index;
      res.start = batch.start;
      res.end = batch.end;
      res.posts = batch.posts.size();
      manifest.windows[i] = std::move(res);
    }
  };
  const std::size_t jobs = std::min(cfg.jobs, std::max<std::size_t>(batches.size(), 1));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }

  write_manifest(manifest, cfg.out / "manifest.json");
  if (cfg.ground_truth) evaluate_run(cfg.out, *cfg.ground_truth, cfg.match_threshold, cfg.w_omega, cfg.w_c);
  return manifest;
}

EvaluationSummary evaluate_windows(const std::map<std::int64_t, std::vector<Topic>>& detected,
                                   std::span<const GroundTruth> truth, double match_threshold, double w_omega,
                                   double w_c) {
  EvaluationSummary out;
  std::set<std::int64_t> labeled;
  std::vector<const GroundTruth*> ordered;
  for (const auto& gt : truth) ordered.push_back(&gt);
  std::sort(ordered.begin(), ordered.end(),
            [](const auto* a, const auto* b) { return a->window_index < b->window_index; });

  for (const auto* gt : ordered) {
    labeled.insert(gt->window_index);
    const auto it = detected.find(gt->window_index);
    if (it == detected.end()) {
      out.skipped.push_back(gt->window_index);
      continue;
    }
    // Detected keywords are normalized, so the labels must be too.
    std::vector<GroundTruthTopic> topics;
    for (const auto& t : gt->topics) {
      GroundTruthTopic n{t.title, {}};
      for (const auto& k : t.keywords) {
        auto w = normalize(k);
        if (!w.empty() && std::find(n.keywords.begin(), n.keywords.end(), w) == n.keywords.end()) {
          n.keywords.push_back(std::move(w));
        }
      }
      if (!n.keywords.empty()) topics.push_back(std::move(n));
    }
    if (topics.empty()) {
      out.skipped.push_back(gt->window_index);
      continue;
    }
    const auto& det = it->second;
    WindowEvaluation e;
    e.window = gt->window_index;
    e.detected = det.size();
    e.gt_topics = topics.size();
    const auto matching = match_topics(det, topics, match_threshold);
    e.topic = topic_scores(matching.size(), det.size(), matching.size(), topics.size());
    e.topic.matches = matching;
    if (const auto assignment = topic_assignment(det, topics)) e.fs = evaluate_fs(*assignment, w_omega, w_c);
    out.windows.push_back(std::move(e));
  }
  for (const auto& [window, topics] : detected) {
    if (!labeled.contains(window)) out.unevaluated.push_back(window);
  }
  return out;
}

std::string evaluation_json(const EvaluationSummary& summary) {
  json doc;
  doc["windows"] = json::array();
  double cl = 0, cs = 0, tot = 0, p = 0, r = 0;
  std::size_t fs_count = 0, matched = 0, detected = 0, gt = 0;
  for (const auto& w : summary.windows) {
    json j;
    j["window"] = w.window;
    if (w.fs) {
      j["fs"] = {{"cluster", w.fs->cluster.total}, {"class", w.fs->cls.total}, {"total", w.fs->total}};
      cl += w.fs->cluster.total;
      cs += w.fs->cls.total;
      tot += w.fs->total;
      ++fs_count;
    } else {
      j["fs"] = nullptr;
    }
    j["topic"] = {{"precision", w.topic.precision}, {"recall", w.topic.recall}, {"f1", w.topic.f1}};
    j["detected"] = w.detected;
    j["gt_topics"] = w.gt_topics;
    j["matches"] = json::array();
    for (const auto& [d, t] : w.topic.matches) j["matches"].push_back({d, t});
    p += w.topic.precision;
    r += w.topic.recall;
    matched += w.topic.matches.size();
    detected += w.detected;
    gt += w.gt_topics;
    doc["windows"].push_back(std::move(j));
  }

  json agg;
  const auto n = static_cast<double>(summary.windows.size());
  agg["evaluated"] = summary.windows.size();
  if (summary.windows.empty()) {
    agg["mean"] = nullptr;
    agg["pooled"] = nullptr;
  } else {
    json mean;
    if (fs_count > 0) {
      const auto m = static_cast<double>(fs_count);
      mean["fs"] = {{"cluster", cl / m}, {"class", cs / m}, {"total", tot / m}};
    } else {
      mean["fs"] = nullptr;
    }
    mean["topic"] = {{"precision", p / n}, {"recall", r / n}, {"f1", f1_score(p / n, r / n)}};
    agg["mean"] = std::move(mean);
    const double pp = detected ? static_cast<double>(matched) / static_cast<double>(detected) : 0.0;
    const double pr = static_cast<double>(matched) / static_cast<double>(gt);
    agg["pooled"] = {{"topic", {{"precision", pp}, {"recall", pr}, {"f1", f1_score(pp, pr)}}}};
  }
  doc["aggregate"] = std::move(agg);
  doc["skipped"] = summary.skipped;
  doc["unevaluated"] = summary.unevaluated;
  return doc.dump(2) + "\n";
}

EvaluationSummary evaluate_run(const fs::path& run_dir, const fs::path& gt_path, double match_threshold,
                               double w_omega, double w_c) {
  const auto manifest = read_manifest(run_dir / "manifest.json");
  const auto truth = load_ground_truth(gt_path);
  std::map<std::int64_t, std::vector<Topic>> detected;
  for (const auto& w : manifest.windows) {
    if (w.error) continue;
    const auto it = w.artifacts.find("topics");
    if (it == w.artifacts.end()) continue;
    std::ifstream in(run_dir / it->second);
    if (!in) throw IoError("cannot open " + (run_dir / it->second).string());
    detected[w.window] = parse_topic_report(in);
  }
  auto summary = evaluate_windows(detected, truth, match_threshold, w_omega, w_c);
  write_text(run_dir / "evaluation.json", evaluation_json(summary));
  return summary;
}

}  // namespace topicgraph
