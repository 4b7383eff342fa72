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

#include <cmath>
#include <set>

#include "support/temp_dir.hpp"
#include "topicgraph/errors.hpp"
#include "topicgraph/hwa.hpp"
#include "topicgraph/random.hpp"

using namespace topicgraph;

namespace {

// Random window graph with consistent tf >= df and df <= batch size.
CoocGraph random_graph(Rng& rng, std::size_t words, std::uint64_t batch) {
  CoocGraph g;
  g.set_batch_size(batch);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < words; ++i) {
    names.push_back("w" + std::to_string(i));
    const auto df = 1 + uniform_index(rng, batch);
    g.add_node(names.back(), {df + uniform_index(rng, 5), df});
  }
  for (std::size_t i = 0; i < words; ++i) {
    for (std::size_t j = i + 1; j < words; ++j) {
      if (uniform01(rng) < 0.4) {
        const auto cap = std::min(g.stats(names[i]).df, g.stats(names[j]).df);
        g.add_edge(names[i], names[j], 1 + uniform_index(rng, cap));
      }
    }
  }
  return g;
}

}  // namespace

TEST_CASE("keyword rating") {
  CoocGraph g;
  g.set_batch_size(10);
  g.add_node("rare", {2, 1});
  g.add_node("everywhere", {15, 10});
  const auto r = keyword_rating(g);
  CHECK(r.at("rare").kr == doctest::Approx(2.0 * std::log(10.0)).epsilon(1e-12));
  CHECK(r.at("rare").kr == doctest::Approx(4.60517).epsilon(1e-6));
  CHECK(r.at("everywhere").kr == 0.0);
  CHECK(r.at("rare").tf == 2);

  CoocGraph doubled;
  doubled.set_batch_size(10);
  doubled.add_node("rare", {4, 1});
  CHECK(keyword_rating(doubled).at("rare").kr == doctest::Approx(2.0 * r.at("rare").kr));
}

TEST_CASE("keyword rating rejects impossible document counts") {
  CoocGraph g;
  g.set_batch_size(2);
  g.add_node("a", {5, 3});
  CHECK_THROWS_AS(keyword_rating(g), DomainError);
  CoocGraph z;
  z.set_batch_size(2);
  z.add_node("a", {0, 0});
  CHECK_THROWS_AS(keyword_rating(z), DomainError);
}

TEST_CASE("keyword quota rounds up") {
  CHECK(keyword_quota(10, 100) == 10);
  CHECK(keyword_quota(10, 7) == 1);
  CHECK(keyword_quota(10, 101) == 11);
  CHECK(keyword_quota(100, 37) == 37);
  CHECK_THROWS_AS(keyword_quota(0, 10), ConfigError);
  CHECK_THROWS_AS(keyword_quota(100.5, 10), ConfigError);
}

TEST_CASE("selection takes the top-rated words") {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    KeywordRatings r;
    const auto n = 1 + uniform_index(rng, 200);
    for (std::size_t i = 0; i < n; ++i) {
      // Few distinct values so ties at the cut are common.
      r["w" + std::to_string(i)] = {1.0 + static_cast<double>(uniform_index(rng, 5)), 1 + uniform_index(rng, 3)};
    }
    const auto keys = select_keywords(r, 10);
    CHECK(keys.size() == static_cast<std::size_t>(std::ceil(0.1 * static_cast<double>(n) - 1e-9)));
    const std::set<std::string> chosen(keys.begin(), keys.end());
    double lowest = INFINITY;
    for (const auto& k : keys) lowest = std::min(lowest, r.at(k).kr);
    for (const auto& [w, rating] : r) {
      if (!chosen.contains(w)) CHECK(rating.kr <= lowest);
    }
  }
}

TEST_CASE("selection ties: higher tf, then word order") {
  const KeywordRatings r{{"b", {2.0, 3}}, {"a", {2.0, 3}}, {"c", {2.0, 9}}, {"d", {5.0, 1}}};
  CHECK(select_keywords(r, 50) == std::vector<std::string>{"d", "c"});
  CHECK(select_keywords(r, 75) == std::vector<std::string>{"d", "c", "a"});
  CHECK(select_keywords(r, 100).size() == 4);
  CHECK_THROWS_AS(select_keywords({}, 10), SizeError);
}

TEST_CASE("zero-rated words are never keywords") {
  const KeywordRatings r{{"a", {0.0, 10}}, {"b", {0.0, 10}}, {"c", {1.0, 1}}};
  CHECK(select_keywords(r, 100) == std::vector<std::string>{"c"});
}

TEST_CASE("cimawa") {
  CoocGraph g;
  g.add_node("x", {2, 2});
  g.add_node("y", {8, 4});
  g.add_node("z", {8, 4});
  g.add_edge("x", "y", 4);
  CHECK(cimawa("x", "y", g, 0.1) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(cimawa("y", "x", g, 0.1) == doctest::Approx(4.0 / 2 + 0.1 * 4.0 / 8).epsilon(1e-12));
  CHECK(cimawa("x", "z", g, 0.1) == 0.0);
  CHECK(cimawa("y", "z", g, 0.1) == cimawa("z", "y", g, 0.1));
  CHECK_THROWS_AS(cimawa("x", "x", g, 0.1), DomainError);
  CHECK_THROWS_AS(cimawa("x", "missing", g, 0.1), DomainError);
}

TEST_CASE("agf algebra on random graphs") {
  Rng rng(9);
  bool asymmetric = false;
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = random_graph(rng, 2 + uniform_index(rng, 12), 30);
    KeywordRatings r = keyword_rating(g);
    std::vector<std::string> keys;
    for (const auto& [w, rating] : r) {
      if (rating.kr > 0) keys.push_back(w);
    }
    const auto agf = build_agf_graph(g, keys, r, 0.1);
    REQUIRE(agf.size() == keys.size());
    for (std::size_t a = 0; a < agf.size(); ++a) {
      const auto& x = agf.word(a);
      for (std::size_t b = 0; b < agf.size(); ++b) {
        if (a == b) continue;
        const auto& y = agf.word(b);
        const double w = agf.weight(a, b);
        CHECK((w > 0) == (g.cooc(x, y) > 0));
        if (w == 0) continue;
        const double back = w * r.at(y).kr / r.at(x).kr;
        CHECK(std::abs(back - cimawa(x, y, g, 0.1)) <= 1e-12 * cimawa(x, y, g, 0.1));
        if (g.stats(x).tf == g.stats(y).tf) {
          const double ratio = w / agf.weight(b, a);
          const double expect = std::pow(r.at(x).kr / r.at(y).kr, 2);
          CHECK(std::abs(ratio - expect) <= 1e-9 * expect);
        }
        if (std::abs(w - agf.weight(b, a)) > 1e-9) asymmetric = true;
      }
    }
  }
  CHECK(asymmetric);
}

TEST_CASE("agf ignores a common scale on ratings") {
  Rng rng(12);
  const auto g = random_graph(rng, 10, 20);
  auto r = keyword_rating(g);
  std::vector<std::string> keys;
  for (const auto& [w, rating] : r) {
    if (rating.kr > 0) keys.push_back(w);
  }
  const auto base = build_agf_graph(g, keys, r, 0.1);
  for (auto& [w, rating] : r) rating.kr *= 3.5;
  const auto scaled = build_agf_graph(g, keys, r, 0.1);
  for (std::size_t a = 0; a < base.size(); ++a) {
    for (std::size_t b = 0; b < base.size(); ++b) {
      CHECK(scaled.weight(a, b) == doctest::Approx(base.weight(a, b)).epsilon(1e-12));
    }
  }
}

TEST_CASE("agf graph keeps only keywords") {
  CoocGraph g;
  g.set_batch_size(4);
  g.add_node("a", {3, 1});
  g.add_node("b", {1, 1});
  g.add_node("c", {1, 1});
  g.add_edge("a", "b", 1);
  g.add_edge("b", "c", 1);
  const auto r = keyword_rating(g);
  const std::vector<std::string> one{"a"};
  const auto single = build_agf_graph(g, one, r, 0.1);
  CHECK(single.size() == 1);
  CHECK(single.arc_count() == 0);

  const std::vector<std::string> two{"a", "b"};
  const auto pair = build_agf_graph(g, two, r, 0.1);
  CHECK(pair.size() == 2);
  CHECK(pair.arc_count() == 2);
  CHECK_FALSE(pair.index_of("c").has_value());

  KeywordRatings zero = r;
  zero.at("b").kr = 0.0;
  CHECK_THROWS_AS(build_agf_graph(g, two, zero, 0.1), DomainError);
  const std::vector<std::string> unknown{"a", "q"};
  CHECK_THROWS_AS(build_agf_graph(g, unknown, r, 0.1), ValidationError);
}

TEST_CASE("agf graph files round-trip") {
  TempDir dir;
  Rng rng(1);
  const auto g = random_graph(rng, 12, 25);
  const auto r = keyword_rating(g);
  std::vector<std::string> keys;
  for (const auto& [w, rating] : r) {
    if (rating.kr > 0) keys.push_back(w);
  }
  auto agf = build_agf_graph(g, keys, r, 0.1);
  agf.set_window(3);
  write_agf_graph(agf, dir / "agf");
  CHECK(read_agf_graph(dir / "agf") == agf);
}
