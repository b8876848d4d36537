// Copyright 2026 The ssmatch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Edge-stream text format:
//
//   # comment
//   n=<num_vertices>        optional, must precede the first edge
//   <u> <v> <weight>        one edge per line
//
// Labels that are all non-negative integers are used as vertex ids directly.
// Otherwise every label is remapped to a dense id in order of first
// appearance, and the header line becomes mandatory.

#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ssmatch/error.hpp"
#include "ssmatch/graph.hpp"

namespace ssmatch {

struct ParsedStream {
  StreamSource stream;
  std::vector<std::string> labels;  // id -> original label; empty if numeric
  std::size_t lines_read = 0;
  std::size_t file_passes = 0;  // single-pass audit: how often the text was read
  std::string content_hash;     // FNV-1a 64 of the raw bytes, hex
};

inline std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    if (i == s.size()) break;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::optional<std::uint64_t> parse_uint(std::string_view s) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

struct RawEdge {
  std::string_view u;
  std::string_view v;
  double weight;
  std::size_t line;
};

}  // namespace detail

inline ParsedStream parse_edge_stream(std::string_view text) {
  using detail::RawEdge;
  std::vector<RawEdge> raw;
  std::optional<std::uint64_t> declared_n;
  bool all_numeric = true;
  std::size_t line_no = 0;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = detail::trim(text.substr(pos, end - pos));
    ++line_no;
    pos = end + 1;
    if (line.empty() || line.front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    if (line.starts_with("n=")) {
      if (!raw.empty()) throw ParseError(line_no, "header n= after first edge");
      if (declared_n) throw ParseError(line_no, "duplicate n= header");
      declared_n = detail::parse_uint(detail::trim(line.substr(2)));
      if (!declared_n || *declared_n == 0 ||
          *declared_n > std::numeric_limits<VertexId>::max()) {
        throw ParseError(line_no, "malformed header, expected n=<positive int>");
      }
      continue;
    }
    const auto tokens = detail::split_ws(line);
    if (tokens.size() != 3) {
      throw ParseError(line_no, "expected '<u> <v> <weight>'");
    }
    double weight = 0.0;
    // std::from_chars for double rejects leading '+', which is fine here.
    auto [ptr, ec] = std::from_chars(tokens[2].data(),
                                     tokens[2].data() + tokens[2].size(), weight);
    if (ec != std::errc() || ptr != tokens[2].data() + tokens[2].size()) {
      throw ParseError(line_no, "malformed weight '" + std::string(tokens[2]) + "'");
    }
    if (!(weight > 0.0) || !std::isfinite(weight)) {
      throw ParseError(line_no, "weight must be positive and finite");
    }
    for (auto t : {tokens[0], tokens[1]}) {
      auto id = detail::parse_uint(t);
      if (!id || *id > std::numeric_limits<VertexId>::max()) all_numeric = false;
    }
    raw.push_back(RawEdge{tokens[0], tokens[1], weight, line_no});
    if (end == text.size()) break;
  }

  ParsedStream out;
  out.lines_read = line_no;
  std::vector<Edge> edges;
  edges.reserve(raw.size());
  std::size_t n = 0;
  if (all_numeric) {
    std::uint64_t max_id = 0;
    for (const RawEdge& r : raw) {
      const auto u = *detail::parse_uint(r.u);
      const auto v = *detail::parse_uint(r.v);
      if (declared_n && (u >= *declared_n || v >= *declared_n)) {
        throw ParseError(r.line, "vertex id not below n=" + std::to_string(*declared_n));
      }
      max_id = std::max({max_id, u, v});
      edges.push_back(Edge{static_cast<VertexId>(u), static_cast<VertexId>(v), r.weight});
    }
    n = declared_n ? *declared_n : (raw.empty() ? 0 : max_id + 1);
  } else {
    if (!declared_n) {
      throw ParseError(raw.empty() ? line_no : raw.front().line,
                       "non-numeric vertex labels require an n= header");
    }
    std::map<std::string_view, VertexId> ids;
    auto id_of = [&](std::string_view label, std::size_t line) {
      auto it = ids.find(label);
      if (it != ids.end()) return it->second;
      if (ids.size() == *declared_n) {
        throw ParseError(line, "more distinct labels than n=" + std::to_string(*declared_n));
      }
      const auto id = static_cast<VertexId>(ids.size());
      ids.emplace(label, id);
      out.labels.emplace_back(label);
      return id;
    };
    for (const RawEdge& r : raw) {
      const VertexId u = id_of(r.u, r.line);
      const VertexId v = id_of(r.v, r.line);
      edges.push_back(Edge{u, v, r.weight});
    }
    n = *declared_n;
  }

  std::unordered_set<std::uint64_t> seen;
  seen.reserve(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].u == edges[i].v) throw ParseError(raw[i].line, "self-loop");
    if (!seen.insert(edge_key(edges[i])).second) {
      throw ParseError(raw[i].line, "duplicate edge");
    }
  }
  out.stream = StreamSource(n, std::move(edges));
  out.content_hash = fnv1a64_hex(text);
  out.file_passes = 1;
  return out;
}

inline ParsedStream read_edge_stream_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed for '" + path + "'");
  return parse_edge_stream(text);
}

inline void write_edge_stream(std::ostream& out, const StreamSource& stream,
                              std::string_view comment = {}) {
  if (!comment.empty()) out << "# " << comment << '\n';
  out << "n=" << stream.num_vertices() << '\n';
  char buf[64];
  for (const Edge& e : stream.edges()) {
    std::snprintf(buf, sizeof(buf), "%.17g", e.weight);
    out << e.u << ' ' << e.v << ' ' << buf << '\n';
  }
}

inline void write_edge_stream_file(const std::string& path, const StreamSource& stream,
                                   std::string_view comment = {}) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  write_edge_stream(out, stream, comment);
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace ssmatch
