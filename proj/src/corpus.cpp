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


#include "topicgraph/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "topicgraph/errors.hpp"

namespace topicgraph {

namespace {

using nlohmann::json;

bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

RawPost parse_record(const std::string& line, std::size_t line_no) {
  json rec;
  try {
    rec = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
  }
  if (!rec.is_object()) throw ParseError("record is not an object", line_no);
  for (const char* key : {"id", "timestamp", "text"}) {
    if (!rec.contains(key)) throw ParseError(std::string("missing field '") + key + "'", line_no);
  }
  const auto& id = rec["id"];
  const auto& ts = rec["timestamp"];
  const auto& text = rec["text"];
  if (!id.is_string()) throw ParseError("field 'id' must be a string", line_no);
  if (!ts.is_number_integer()) throw ParseError("field 'timestamp' must be an integer", line_no);
  if (!text.is_string()) throw ParseError("field 'text' must be a string", line_no);

  RawPost post{id.get<std::string>(), ts.get<Timestamp>(), text.get<std::string>()};
  if (post.id.empty()) throw ParseError("field 'id' is empty", line_no);
  return post;
}

}  // namespace

std::vector<RawPost> parse_posts(std::istream& in) {
  std::vector<RawPost> posts;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    RawPost post = parse_record(line, line_no);
    if (!seen.insert(post.id).second) throw ParseError("duplicate id '" + post.id + "'", line_no);
    posts.push_back(std::move(post));
  }
  if (in.bad()) throw IoError("read failure");
  std::stable_sort(posts.begin(), posts.end(),
                   [](const RawPost& a, const RawPost& b) { return a.timestamp < b.timestamp; });
  return posts;
}

std::vector<RawPost> load_posts(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return parse_posts(in);
}

Timestamp midnight_utc(Timestamp t) {
  Timestamp day = t / kSecondsPerDay;
  if (t % kSecondsPerDay < 0) --day;
  return day * kSecondsPerDay;
}

std::vector<Batch> window_posts(std::span<const RawPost> posts, std::int64_t duration, Timestamp origin) {
  if (duration <= 0) throw RangeError("window duration must be positive");
  std::vector<Batch> batches;
  for (const RawPost& post : posts) {
    if (post.timestamp < origin) {
      throw RangeError("post '" + post.id + "' precedes the window origin");
    }
    const auto index = static_cast<std::size_t>((post.timestamp - origin) / duration);
    while (batches.size() <= index) {
      const auto l = static_cast<std::int64_t>(batches.size());
      batches.push_back(Batch{l, origin + l * duration, origin + (l + 1) * duration, {}});
    }
    batches[index].posts.push_back(post);
  }
  return batches;
}

std::vector<Batch> window_posts(std::span<const RawPost> posts, std::int64_t duration) {
  if (posts.empty()) return {};
  const auto earliest = std::min_element(posts.begin(), posts.end(), [](const RawPost& a, const RawPost& b) {
    return a.timestamp < b.timestamp;
  });
  return window_posts(posts, duration, midnight_utc(earliest->timestamp));
}

std::vector<GroundTruth> parse_ground_truth(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("ground truth is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("windows") || !doc["windows"].is_array()) {
    throw ValidationError("ground truth must be an object with a 'windows' array");
  }

  std::vector<GroundTruth> out;
  std::set<std::int64_t> seen;
  for (const auto& w : doc["windows"]) {
    if (!w.is_object() || !w.contains("index") || !w["index"].is_number_integer()) {
      throw ValidationError("window entry needs an integer 'index'");
    }
    GroundTruth gt;
    gt.window_index = w["index"].get<std::int64_t>();
    if (gt.window_index < 0) throw ValidationError("negative window index");
    if (!seen.insert(gt.window_index).second) {
      throw ValidationError("duplicate window index " + std::to_string(gt.window_index));
    }
    if (!w.contains("topics") || !w["topics"].is_array() || w["topics"].empty()) {
      throw ValidationError("window " + std::to_string(gt.window_index) + " has no topics");
    }
    for (const auto& t : w["topics"]) {
      GroundTruthTopic topic;
      if (t.contains("title") && t["title"].is_string()) topic.title = t["title"].get<std::string>();
      if (!t.contains("keywords") || !t["keywords"].is_array() || t["keywords"].empty()) {
        throw ValidationError("window " + std::to_string(gt.window_index) + " has a topic without keywords");
      }
      for (const auto& k : t["keywords"]) {
        if (!k.is_string() || k.get<std::string>().empty()) {
          throw ValidationError("keywords must be non-empty strings");
        }
        topic.keywords.push_back(k.get<std::string>());
      }
      gt.topics.push_back(std::move(topic));
    }
    out.push_back(std::move(gt));
  }
  return out;
}

std::vector<GroundTruth> load_ground_truth(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return parse_ground_truth(in);
}

}  // namespace topicgraph
