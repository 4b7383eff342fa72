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
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace topicgraph {

/// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

struct RawPost {
  std::string id;
  Timestamp timestamp = 0;
  std::string text;

  bool operator==(const RawPost&) const = default;
};

/// Posts whose timestamps fall in [start, end).
struct Batch {
  std::int64_t index = 0;
  Timestamp start = 0;
  Timestamp end = 0;
  std::vector<RawPost> posts;

  bool operator==(const Batch&) const = default;
};

struct GroundTruthTopic {
  std::string title;
  std::vector<std::string> keywords;
};

struct GroundTruth {
  std::int64_t window_index = 0;
  std::vector<GroundTruthTopic> topics;
};

constexpr Timestamp kSecondsPerDay = 86400;

/// Reads line-delimited `{"id", "timestamp", "text"}` records. The result is
/// sorted by timestamp; equal timestamps keep their file order. Blank lines
/// are skipped.
std::vector<RawPost> load_posts(const std::filesystem::path& path);

/// Same as load_posts, from an in-memory stream of records.
std::vector<RawPost> parse_posts(std::istream& in);

/// Midnight UTC of the day containing `t`.
Timestamp midnight_utc(Timestamp t);

/// Assigns every post to window floor((t - origin) / duration). Windows from 0
/// up to the last occupied one are all emitted, empty ones included.
/// Throws RangeError when a post precedes `origin`.
std::vector<Batch> window_posts(std::span<const RawPost> posts, std::int64_t duration, Timestamp origin);

/// Uses the midnight-UTC origin of the earliest post.
std::vector<Batch> window_posts(std::span<const RawPost> posts, std::int64_t duration);

std::vector<GroundTruth> load_ground_truth(const std::filesystem::path& path);
std::vector<GroundTruth> parse_ground_truth(std::istream& in);

}  // namespace topicgraph
