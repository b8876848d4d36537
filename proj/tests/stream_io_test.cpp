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

#include "ssmatch/stream_io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "test_support.hpp"

namespace ssmatch {
namespace {

TEST(ParseEdgeStream, NumericWithComments) {
  const ParsedStream p = parse_edge_stream("# demo\n0 1 2.5\n\n1 2 3\n  # indented comment\n2 3 1e-3\n");
  EXPECT_EQ(p.stream.num_vertices(), 4u);
  ASSERT_EQ(p.stream.size(), 3u);
  EXPECT_EQ(p.stream.edges()[0], (Edge{0, 1, 2.5}));
  EXPECT_EQ(p.stream.edges()[2], (Edge{2, 3, 1e-3}));
  EXPECT_TRUE(p.labels.empty());
  EXPECT_EQ(p.file_passes, 1u);
}

TEST(ParseEdgeStream, HeaderSetsVertexCount) {
  const ParsedStream p = parse_edge_stream("n=10\n0 1 1\n");
  EXPECT_EQ(p.stream.num_vertices(), 10u);
  EXPECT_THROW(parse_edge_stream("n=2\n0 5 1\n"), ParseError);
}

TEST(ParseEdgeStream, LabelsNeedHeaderAndAreRemapped) {
  EXPECT_THROW(parse_edge_stream("a b 1\n"), ParseError);
  const ParsedStream p = parse_edge_stream("n=3\nx y 1\ny z 2\n");
  EXPECT_EQ(p.labels, (std::vector<std::string>{"x", "y", "z"}));
  EXPECT_EQ(p.stream.edges()[1], (Edge{1, 2, 2}));
  EXPECT_THROW(parse_edge_stream("n=2\nx y 1\ny z 2\n"), ParseError);
}

TEST(ParseEdgeStream, ErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse_edge_stream(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("0 1 1\n1 2 abc\n"), 2u);
  EXPECT_EQ(line_of("0 1 1\n# c\n1 2\n"), 3u);
  EXPECT_EQ(line_of("0 1 1\n1 1 4\n"), 2u);
  EXPECT_EQ(line_of("0 1 1\n1 0 4\n"), 2u);
  EXPECT_EQ(line_of("0 1 -1\n"), 1u);
  EXPECT_EQ(line_of("0 1 0\n"), 1u);
  EXPECT_EQ(line_of("0 1 1\nn=4\n"), 2u);
  EXPECT_EQ(line_of("n=0\n"), 1u);
  EXPECT_EQ(line_of("0 1 1 7\n"), 1u);
}

TEST(ParseEdgeStream, EmptyInput) {
  const ParsedStream p = parse_edge_stream("");
  EXPECT_TRUE(p.stream.empty());
  EXPECT_EQ(p.stream.num_vertices(), 0u);
}

TEST(ParseEdgeStream, HashTracksContent) {
  EXPECT_EQ(parse_edge_stream("0 1 1\n").content_hash, parse_edge_stream("0 1 1\n").content_hash);
  EXPECT_NE(parse_edge_stream("0 1 1\n").content_hash, parse_edge_stream("0 1 2\n").content_hash);
  EXPECT_EQ(fnv1a64_hex(""), "cbf29ce484222325");
}

TEST(ReadEdgeStreamFile, MissingFileIsIoError) {
  EXPECT_THROW(read_edge_stream_file("/nonexistent/dir/stream.txt"), IoError);
}

// Property: writing and re-reading any stream reproduces it bit for bit.
TEST(StreamRoundTrip, ExactForRandomStreams) {
  std::mt19937_64 rng(5);
  const auto dir = std::filesystem::temp_directory_path();
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 15;
    const auto edges = testing::random_edges(rng, n, rng() % 30, testing::wide_weight);
    const StreamSource s(n, edges);
    std::ostringstream text;
    write_edge_stream(text, s, "trial " + std::to_string(trial));
    const ParsedStream back = parse_edge_stream(text.str());
    ASSERT_EQ(back.stream.num_vertices(), n);
    ASSERT_TRUE(std::equal(s.edges().begin(), s.edges().end(), back.stream.edges().begin(),
                           back.stream.edges().end()));
    if (trial % 50 == 0) {
      const auto path = (dir / ("ssmatch_roundtrip_" + std::to_string(trial) + ".txt")).string();
      write_edge_stream_file(path, s);
      const ParsedStream f = read_edge_stream_file(path);
      ASSERT_TRUE(std::equal(s.edges().begin(), s.edges().end(), f.stream.edges().begin(),
                             f.stream.edges().end()));
      std::filesystem::remove(path);
    }
  }
}

}  // namespace
}  // namespace ssmatch
