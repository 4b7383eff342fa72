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


#include "topicgraph/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "topicgraph/errors.hpp"
#include "tsv.hpp"

namespace topicgraph {

namespace {

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T v{};
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end) throw ConfigError("bad value '" + text + "' for " + key);
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError("bad boolean '" + text + "' for " + key);
}

std::string show(bool b) { return b ? "true" : "false"; }
std::string show(double d) { return detail::format_double(d); }
template <typename T>
  requires std::is_integral_v<T>
std::string show(T v) { return std::to_string(v); }

struct Setting {
  std::function<void(PipelineConfig&, const std::string& key, const std::string& value)> set;
  std::function<std::string(const PipelineConfig&)> get;
};

template <typename T>
Setting number(T PipelineConfig::*member) {
  return {[member](PipelineConfig& c, const std::string& k, const std::string& v) { c.*member = parse_number<T>(k, v); },
          [member](const PipelineConfig& c) { return show(c.*member); }};
}

template <typename Sub, typename T>
Setting nested(Sub PipelineConfig::*sub, T Sub::*member) {
  return {[sub, member](PipelineConfig& c, const std::string& k, const std::string& v) {
            (c.*sub).*member = parse_number<T>(k, v);
          },
          [sub, member](const PipelineConfig& c) { return show((c.*sub).*member); }};
}

const std::map<std::string, Setting>& settings() {
  static const std::map<std::string, Setting> table = [] {
    std::map<std::string, Setting> t;
    t["corpus.window_seconds"] = number(&PipelineConfig::window_seconds);
    t["corpus.origin"] = {[](PipelineConfig& c, const std::string& k, const std::string& v) {
                            if (v.empty() || v == "auto") {
                              c.origin.reset();
                            } else {
                              c.origin = parse_number<Timestamp>(k, v);
                            }
                          },
                          [](const PipelineConfig& c) { return c.origin ? std::to_string(*c.origin) : std::string("auto"); }};
    t["corpus.stopwords"] = {[](PipelineConfig& c, const std::string&, const std::string& v) { c.stopwords = v; },
                             [](const PipelineConfig& c) { return c.stopwords.string(); }};
    t["corpus.count_empty_posts"] = {
        [](PipelineConfig& c, const std::string& k, const std::string& v) { c.count_empty_posts = parse_bool(k, v); },
        [](const PipelineConfig& c) { return show(c.count_empty_posts); }};

    t["hwa.h"] = number(&PipelineConfig::h);
    t["hwa.delta"] = number(&PipelineConfig::delta);

    t["embed.method"] = {[](PipelineConfig& c, const std::string& k, const std::string& v) {
                           if (v == "node2vec") {
                             c.embedding = EmbeddingMethod::node2vec;
                           } else if (v == "deepwalk") {
                             c.embedding = EmbeddingMethod::deepwalk;
                           } else {
                             throw ConfigError("bad value '" + v + "' for " + k + " (node2vec|deepwalk)");
                           }
                         },
                         [](const PipelineConfig& c) {
                           return std::string(c.embedding == EmbeddingMethod::node2vec ? "node2vec" : "deepwalk");
                         }};
    t["embed.num_walks"] = nested(&PipelineConfig::walk, &WalkConfig::num_walks);
    t["embed.walk_length"] = nested(&PipelineConfig::walk, &WalkConfig::walk_length);
    t["embed.p"] = nested(&PipelineConfig::walk, &WalkConfig::p);
    t["embed.q"] = nested(&PipelineConfig::walk, &WalkConfig::q);
    t["embed.dim"] = nested(&PipelineConfig::train, &TrainConfig::dim);
    t["embed.window_size"] = nested(&PipelineConfig::train, &TrainConfig::window);
    t["embed.epochs"] = nested(&PipelineConfig::train, &TrainConfig::epochs);
    t["embed.negative_samples"] = nested(&PipelineConfig::train, &TrainConfig::negative_samples);
    t["embed.learning_rate"] = nested(&PipelineConfig::train, &TrainConfig::learning_rate);
    t["embed.min_learning_rate"] = nested(&PipelineConfig::train, &TrainConfig::min_learning_rate);

    t["reduce.n_neighbors"] = nested(&PipelineConfig::reduce, &ReduceConfig::n_neighbors);
    t["reduce.min_dist"] = nested(&PipelineConfig::reduce, &ReduceConfig::min_dist);
    t["reduce.spread"] = nested(&PipelineConfig::reduce, &ReduceConfig::spread);
    t["reduce.target_dim"] = nested(&PipelineConfig::reduce, &ReduceConfig::target_dim);
    t["reduce.n_epochs"] = nested(&PipelineConfig::reduce, &ReduceConfig::n_epochs);
    t["reduce.negative_sample_rate"] = nested(&PipelineConfig::reduce, &ReduceConfig::negative_sample_rate);

    t["cluster.method"] = {[](PipelineConfig& c, const std::string& k, const std::string& v) {
                             if (v == "hdbscan") {
                               c.clustering = ClusteringMethod::hdbscan;
                             } else if (v == "kmeans") {
                               c.clustering = ClusteringMethod::kmeans;
                             } else {
                               throw ConfigError("bad value '" + v + "' for " + k + " (hdbscan|kmeans)");
                             }
                           },
                           [](const PipelineConfig& c) {
                             return std::string(c.clustering == ClusteringMethod::hdbscan ? "hdbscan" : "kmeans");
                           }};
    t["cluster.n_clusters"] = number(&PipelineConfig::n_clusters);
    t["cluster.max_iter"] = number(&PipelineConfig::max_iter);
    t["cluster.min_cluster_size"] = nested(&PipelineConfig::hdbscan, &HdbscanConfig::min_cluster_size);
    t["cluster.min_samples"] = nested(&PipelineConfig::hdbscan, &HdbscanConfig::min_samples);
    t["cluster.selection"] = {[](PipelineConfig& c, const std::string& k, const std::string& v) {
                                if (v == "eom") {
                                  c.hdbscan.selection = ClusterSelection::excess_of_mass;
                                } else if (v == "leaf") {
                                  c.hdbscan.selection = ClusterSelection::leaf;
                                } else {
                                  throw ConfigError("bad value '" + v + "' for " + k + " (eom|leaf)");
                                }
                              },
                              [](const PipelineConfig& c) {
                                return std::string(c.hdbscan.selection == ClusterSelection::leaf ? "leaf" : "eom");
                              }};
    t["cluster.allow_single_cluster"] = {
        [](PipelineConfig& c, const std::string& k, const std::string& v) {
          c.hdbscan.allow_single_cluster = parse_bool(k, v);
        },
        [](const PipelineConfig& c) { return show(c.hdbscan.allow_single_cluster); }};
    t["cluster.topic_score"] = {[](PipelineConfig& c, const std::string& k, const std::string& v) {
                                  if (v == "kr_sum") {
                                    c.topic_score = TopicScore::rating_sum;
                                  } else if (v == "size") {
                                    c.topic_score = TopicScore::cluster_size;
                                  } else {
                                    throw ConfigError("bad value '" + v + "' for " + k + " (kr_sum|size)");
                                  }
                                },
                                [](const PipelineConfig& c) {
                                  return std::string(c.topic_score == TopicScore::rating_sum ? "kr_sum" : "size");
                                }};
    t["cluster.top_k"] = number(&PipelineConfig::top_k);

    t["eval.match_threshold"] = number(&PipelineConfig::match_threshold);
    t["eval.w_omega"] = number(&PipelineConfig::w_omega);
    t["eval.w_c"] = number(&PipelineConfig::w_c);

    t["run.seed"] = number(&PipelineConfig::seed);
    t["run.jobs"] = number(&PipelineConfig::jobs);
    return t;
  }();
  return table;
}

}  // namespace

void PipelineConfig::validate() const {
  if (window_seconds <= 0) throw ConfigError("window duration must be positive");
  if (!(h > 0.0 && h <= 100.0)) throw ConfigError("h must lie in (0, 100]");
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw ConfigError("delta must be non-negative");
  effective_walk().validate();
  train.validate();
  if (reduce.n_neighbors < 1 || reduce.target_dim < 1 || reduce.n_epochs < 1 || reduce.min_dist < 0.0) {
    throw ConfigError("invalid reduce settings");
  }
  if (n_clusters < 1) throw ConfigError("n_clusters must be at least 1");
  if (hdbscan.min_cluster_size < 2) throw ConfigError("min_cluster_size must be at least 2");
  if (top_k < 1) throw ConfigError("top_k must be at least 1");
  if (!(match_threshold > 0.0 && match_threshold <= 1.0)) throw ConfigError("match_threshold must lie in (0, 1]");
  if (w_omega < 0.0 || w_c < 0.0 || !(w_omega + w_c > 0.0)) throw ConfigError("FS weights must have a positive sum");
  if (jobs < 1) throw ConfigError("jobs must be at least 1");
}

WalkConfig PipelineConfig::effective_walk() const {
  WalkConfig w = walk;
  if (embedding == EmbeddingMethod::deepwalk) w.p = w.q = 1.0;
  return w;
}

void apply_setting(PipelineConfig& cfg, const std::string& dotted_key, const std::string& value) {
  const auto it = settings().find(dotted_key);
  if (it == settings().end()) throw ConfigError("unknown setting '" + dotted_key + "'");
  it->second.set(cfg, dotted_key, value);
}

const std::vector<std::string>& setting_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, s] : settings()) k.push_back(name);
    return k;
  }();
  return keys;
}

std::string setting_value(const PipelineConfig& cfg, const std::string& dotted_key) {
  const auto it = settings().find(dotted_key);
  if (it == settings().end()) throw ConfigError("unknown setting '" + dotted_key + "'");
  return it->second.get(cfg);
}

void load_config(PipelineConfig& cfg, std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("setting '" + section + "' must live in a [section]");
    for (const auto& [key, value] : body) apply_setting(cfg, section + "." + key, value.get_value<std::string>());
  }
}

void load_config(PipelineConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  load_config(cfg, in);
}

std::string dump_config(const PipelineConfig& cfg) {
  std::ostringstream out;
  std::string current;
  for (const auto& key : setting_keys()) {
    const auto dot = key.find('.');
    const auto section = key.substr(0, dot);
    if (section != current) {
      if (!current.empty()) out << '\n';
      out << '[' << section << "]\n";
      current = section;
    }
    out << key.substr(dot + 1) << " = " << setting_value(cfg, key) << '\n';
  }
  return out.str();
}

}  // namespace topicgraph
