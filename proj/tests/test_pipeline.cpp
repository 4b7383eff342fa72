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


#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "support/planted.hpp"
#include "support/temp_dir.hpp"
#include "topicgraph/errors.hpp"
#include "topicgraph/pipeline.hpp"

using namespace topicgraph;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Small training budget; the structure of the run is what these tests cover.
PipelineConfig quick_config(const TempDir& dir) {
  PipelineConfig c;
  c.walk.num_walks = 10;
  c.train.epochs = 5;
  c.reduce.n_epochs = 100;
  c.origin = planted::kOrigin;
  c.input = dir / "posts.jsonl";
  c.out = dir / "out";
  return c;
}

Topic topic(std::vector<std::string> words) { return Topic{std::move(words), 1.0, 0}; }

int run_cli(const std::string& args) {
  const std::string cmd = std::string(TOPICGRAPH_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("two windows give two reports") {
  TempDir dir;
  planted::write_posts(planted::make_corpus(1, 2), dir / "posts.jsonl");
  const auto cfg = quick_config(dir);
  const auto m = run_pipeline(cfg);
  REQUIRE(m.windows.size() == 2);
  CHECK(m.all_ok());
  CHECK(m.version == library_version());
  for (std::int64_t w = 0; w < 2; ++w) {
    CHECK(m.windows[w].window == w);
    CHECK(m.windows[w].posts == 190);
    std::ifstream in(cfg.out / "topics" / (w == 0 ? "window_0000.json" : "window_0001.json"));
    REQUIRE(in);
    std::int64_t index = -1;
    const auto topics = parse_topic_report(in, &index);
    CHECK(index == w);
    CHECK(topics.size() <= cfg.top_k);
    REQUIRE(topics.size() == m.windows[w].topics.size());
    for (std::size_t t = 0; t < topics.size(); ++t) {
      CHECK(topics[t].keywords == m.windows[w].topics[t].keywords);
      CHECK(topics[t].score == m.windows[w].topics[t].score);
    }
  }
  const auto back = read_manifest(cfg.out / "manifest.json");
  CHECK(back.windows.size() == 2);
  CHECK(back.config == dump_config(cfg));
}

TEST_CASE("a window with one keyword yields at most one topic") {
  Batch b;
  b.posts = {{"1", 0, "alpha beta"}, {"2", 1, "gamma"}};
  const auto r = process_window(b, {}, PipelineConfig{});
  CHECK(r.keywords <= 1);
  CHECK(r.topics.size() <= 1);
  CHECK_FALSE(r.warnings.empty());

  const auto empty = process_window(Batch{}, {}, PipelineConfig{});
  CHECK(empty.topics.empty());
  CHECK_FALSE(empty.warnings.empty());
}

TEST_CASE("reruns are byte-identical") {
  TempDir dir;
  planted::write_posts(planted::make_corpus(4, 2), dir / "posts.jsonl");
  auto cfg = quick_config(dir);
  run_pipeline(cfg);
  cfg.out = dir / "again";
  cfg.jobs = 2;
  run_pipeline(cfg);
  for (const char* name : {"window_0000.json", "window_0001.json"}) {
    const auto a = slurp(dir / "out" / "topics" / name);
    CHECK_FALSE(a.empty());
    CHECK(a == slurp(dir / "again" / "topics" / name));
  }
}

TEST_CASE("phases rerun from persisted intermediates") {
  TempDir dir;
  const auto corpus = planted::make_corpus(2, 1);
  const auto batches = window_posts(corpus.posts, planted::kWindow, planted::kOrigin);
  auto cfg = quick_config(dir);
  const auto first = process_window(batches[0], {}, cfg, dir / "a");

  const auto cooc = read_cooc_graph(dir / "a" / "cooc");
  const auto kg = run_hwa_phase(cooc, cfg);
  write_agf_graph(kg.graph, dir / "agf");
  CHECK(slurp(dir / "agf.nodes.tsv") == slurp(dir / "a" / "agf.nodes.tsv"));
  CHECK(slurp(dir / "agf.edges.tsv") == slurp(dir / "a" / "agf.edges.tsv"));

  const auto agf = read_agf_graph(dir / "a" / "agf");
  write_node_vectors(run_embed_phase(agf, cfg), dir / "embedding.tsv", true);
  CHECK(slurp(dir / "embedding.tsv") == slurp(dir / "a" / "embedding.tsv"));

  const auto embedding = read_node_vectors(dir / "a" / "embedding.tsv", true);
  const auto reduced = run_reduce_phase(embedding, cfg, batches[0].index);
  write_node_vectors(reduced, dir / "reduced.tsv", false);
  CHECK(slurp(dir / "reduced.tsv") == slurp(dir / "a" / "reduced.tsv"));

  const auto clustering = run_cluster_phase(read_node_vectors(dir / "a" / "reduced.tsv", false), cfg, 0);
  const auto topics = top_k_topics(extract_topics(agf.words(), clustering.labels, graph_ratings(agf)), cfg.top_k);
  CHECK(topics == first.topics);
}

TEST_CASE("ground truth covering part of the run") {
  TempDir dir;
  auto corpus = planted::make_corpus(3, 3);
  planted::write_posts(corpus, dir / "posts.jsonl");
  corpus.truth.pop_back();
  corpus.truth.push_back({7, {{"late", {"x", "y"}}}});
  planted::write_truth(corpus, dir / "gt.json");
  auto cfg = quick_config(dir);
  run_pipeline(cfg);
  const auto s = evaluate_run(cfg.out, dir / "gt.json");
  CHECK(s.windows.size() == 2);
  CHECK(s.unevaluated == std::vector<std::int64_t>{2});
  CHECK(s.skipped == std::vector<std::int64_t>{7});
  CHECK(fs::exists(cfg.out / "evaluation.json"));
}

TEST_CASE("perfect detection scores perfectly") {
  const std::vector<GroundTruth> gt{{0, {{"a", {"a", "b", "c"}}, {"d", {"d", "e"}}}}, {1, {{"f", {"f", "g"}}}}};
  const std::map<std::int64_t, std::vector<Topic>> detected{
      {0, {topic({"d", "e"}), topic({"c", "b", "a"})}}, {1, {topic({"g", "f"})}}};
  const auto s = evaluate_windows(detected, gt);
  REQUIRE(s.windows.size() == 2);
  for (const auto& w : s.windows) {
    CHECK(w.topic.precision == 1.0);
    CHECK(w.topic.recall == 1.0);
    CHECK(w.topic.f1 == 1.0);
    REQUIRE(w.fs);
    CHECK(w.fs->cluster.total == 0.0);
    CHECK(w.fs->total == 0.0);
  }
  CHECK(s.skipped.empty());
  CHECK(s.unevaluated.empty());
  const auto doc = nlohmann::json::parse(evaluation_json(s));
  CHECK(doc.dump().find("\"f1\"") != std::string::npos);
}

TEST_CASE("cli exit codes") {
  TempDir dir;
  planted::write_posts(planted::make_corpus(5, 1), dir / "posts.jsonl");
  std::ofstream(dir / "bad.cfg") << "[hwa]\nrate = 3\n";
  const auto in = (dir / "posts.jsonl").string();
  const auto out = (dir / "out").string();
  CHECK(run_cli("detect --input " + (dir / "missing.jsonl").string() + " --out " + out) == 2);
  CHECK(run_cli("detect --input " + in + " --out " + out + " --config " + (dir / "bad.cfg").string()) == 2);
  CHECK(run_cli("detect --input " + in + " --out " + out + " --h 0") == 2);
  CHECK(run_cli("detect --input " + in + " --out " + out + " --num_walks 10 --epochs 5 --origin 1483228800") == 0);
  CHECK(fs::exists(dir / "out" / "topics" / "window_0000.json"));
}
