// Copyright 2026 The trap2 Authors
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

#include "trap2/explanation.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include "test_util.hpp"

namespace trap2 {
namespace {

TEST(ExplanationTest, JsonRoundTripKeepsInfinity) {
  const Graph g = testing::path_graph(4, 2);
  const std::vector<int> nodes = {1, 0, 2, 3};
  Explanation e = extract(nodes, induced_submatrix(g.adjacency, nodes),
                          {std::numeric_limits<double>::infinity(), 0.5, 0.7, 0.1},
                          Eigen::MatrixXd::Constant(4, 2, 0.25), 2);
  e.method = "greedy";
  const auto j = to_json(e);
  EXPECT_EQ(j["node_scores"]["1"], "inf");
  EXPECT_EQ(j["selected_nodes"], nlohmann::json({1, 2}));
  EXPECT_EQ(j["selected_edges"], nlohmann::json({{1, 2}}));
  const auto path = std::filesystem::temp_directory_path() / "trap2_expl.json";
  save_explanation(e, path);
  const Explanation back = load_explanation(path);
  std::filesystem::remove(path);
  EXPECT_TRUE(std::isinf(back.score_of(1)));
  EXPECT_EQ(back.score_of(2), 0.7);
  EXPECT_EQ(back.selected_edges, e.selected_edges);
  EXPECT_EQ(back.feature_scores, e.feature_scores);
  EXPECT_EQ(to_json(back), j);
  EXPECT_THROW(back.score_of(9), std::out_of_range);
}

TEST(ExplanationTest, FeatureSelectionTakesTopHalf) {
  const std::vector<int> nodes = {0};
  Eigen::MatrixXd fs(1, 5);
  fs << 0.1, 0.9, 0.3, 0.9, 0.0;
  const auto e = extract(nodes, Adjacency::Zero(1, 1), {1.0}, fs, 1);
  EXPECT_EQ(e.selected_features.front(), (std::vector<int>{1, 2, 3}));
}

TEST(ExplanationTest, DotMarksSelectionAndCenter) {
  const Graph g = testing::path_graph(3, 1);
  const std::vector<int> nodes = {0, 1, 2};
  const auto e = extract(nodes, g.adjacency, {3, 2, 1},
                         Eigen::MatrixXd::Ones(3, 1), 2);
  const std::string dot = to_dot(e, g);
  EXPECT_NE(dot.find("0 [style=filled, fillcolor=lightblue, shape=doublecircle"),
            std::string::npos);
  EXPECT_NE(dot.find("0 -- 1 [penwidth=3]"), std::string::npos);
  EXPECT_NE(dot.find("1 -- 2 [color=gray]"), std::string::npos);
  EXPECT_NE(dot.find("2 [];"), std::string::npos);
}

}  // namespace
}  // namespace trap2
