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


#include "topicgraph/matrix.hpp"

#include <sstream>

#include "tsv.hpp"

namespace topicgraph {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void write_node_vectors(const NodeVectors& v, const std::filesystem::path& path, bool with_header) {
  auto out = detail::open_out(path);
  if (with_header) out << v.values.rows() << ' ' << v.values.cols() << '\n';
  for (std::size_t i = 0; i < v.values.rows(); ++i) {
    out << v.words.at(i);
    for (double x : v.values.row(i)) out << '\t' << detail::format_double(x);
    out << '\n';
  }
}

NodeVectors read_node_vectors(const std::filesystem::path& path, bool with_header) {
  auto in = detail::open_in(path);
  std::size_t expected_rows = 0;
  std::size_t cols = 0;
  std::size_t first_line = 1;
  if (with_header) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("missing header in " + path.string(), 1);
    std::istringstream hs(line);
    if (!(hs >> expected_rows >> cols)) throw ParseError("bad header in " + path.string(), 1);
    first_line = 2;
  }
  NodeVectors v;
  std::vector<double> values;
  detail::for_each_row(
      in, with_header ? cols + 1 : 0,
      [&](const std::vector<std::string>& f, std::size_t line) {
        if (cols == 0) cols = f.size() - 1;
        if (f.size() != cols + 1) throw ParseError("inconsistent vector width", line);
        v.words.push_back(f[0]);
        for (std::size_t j = 1; j < f.size(); ++j) values.push_back(detail::parse_double(f[j], line));
      },
      first_line);
  if (with_header && v.words.size() != expected_rows) throw ParseError("row count does not match header", 1);
  v.values = Matrix(v.words.size(), cols);
  v.values.data() = std::move(values);
  return v;
}

}  // namespace topicgraph
