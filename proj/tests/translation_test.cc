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

#include "trap2/translation.hpp"

#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"
#include "trap2/synthetic.hpp"

namespace trap2 {
namespace {

using testing::bfs_oracle;
using testing::path_graph;
using testing::random_graph;
using testing::star_graph;

TEST(TranslationTest, PathBall) {
  const auto dom = translate(path_graph(5), 0, 2);
  EXPECT_EQ(dom.nodes, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(dom.hop_of, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(dom.size(), 3);
}

TEST(TranslationTest, CenterComesFirst) {
  const auto dom = translate(path_graph(5), 3, 1);
  EXPECT_EQ(dom.nodes, (std::vector<int>{3, 2, 4}));
  EXPECT_EQ(dom.position_of(4), 2);
  EXPECT_EQ(dom.position_of(0), -1);
}

TEST(TranslationTest, StarCoversEverything) {
  const auto dom = translate(star_graph(6), 0, 1);
  EXPECT_EQ(dom.size(), 7);
}

TEST(TranslationTest, IsolatedNode) {
  Graph g = path_graph(3);
  g.adjacency.row(2).setZero();
  g.adjacency.col(2).setZero();
  const auto dom = translate(g, 2, 3);
  EXPECT_EQ(dom.nodes, (std::vector<int>{2}));
  EXPECT_EQ(dom.adjacency, Adjacency::Zero(1, 1));
}

TEST(TranslationTest, BadArguments) {
  EXPECT_THROW(translate(path_graph(3), 3, 1), GraphError);
  EXPECT_THROW(translate(path_graph(3), -1, 1), GraphError);
  EXPECT_THROW(translate(path_graph(3), 0, 0), GraphError);
}

TEST(TranslationTest, InducedEdgesAndHopsAgreeWithSource) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Graph g = random_graph(rng, 30, 0.08, 2);
    const int center = trial % 30;
    const auto dom = translate(g, center, 2);
    const auto dist = bfs_oracle(g.adjacency, center);
    for (int q = 0; q < dom.size(); ++q) {
      const int u = dom.nodes[static_cast<size_t>(q)];
      EXPECT_EQ(dom.hop_of[static_cast<size_t>(q)], dist[static_cast<size_t>(u)]);
      EXPECT_EQ(dom.features.row(q), g.features.row(u));
      for (int r = 0; r < dom.size(); ++r) {
        EXPECT_EQ(dom.adjacency(q, r),
                  g.adjacency(u, dom.nodes[static_cast<size_t>(r)]));
      }
    }
    int expected = 0;
    for (int d : dist) expected += (d >= 0 && d <= 2) ? 1 : 0;
    EXPECT_EQ(dom.size(), expected);
  }
}

TEST(TranslationTest, MotifDomainsAreSmall) {
  for (auto kind : {DatasetKind::kBaShapes, DatasetKind::kTreeCycle,
                    DatasetKind::kTreeGrid}) {
    const Graph g = generate(DatasetSpec::defaults(kind));
    for (int v : motif_nodes(g)) {
      ASSERT_LT(translate(g, v, 3).size(), g.num_nodes());
    }
  }
}

}  // namespace
}  // namespace trap2
