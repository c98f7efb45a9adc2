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

#include "trap2/evaluation.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "test_util.hpp"
#include "trap2/gcn.hpp"
#include "trap2/synthetic.hpp"

namespace trap2 {
namespace {

using testing::path_graph;

Explanation picked(std::vector<int> nodes) {
  Explanation e;
  e.selected_nodes = std::move(nodes);
  return e;
}

TEST(AccuracyTest, Examples) {
  const std::vector<int> truth = {1, 2, 3, 4, 5};
  EXPECT_EQ(accuracy(picked({5, 4, 3, 2, 1}), truth), 1.0);
  EXPECT_EQ(accuracy(picked({6, 7, 8, 9, 10}), truth), 0.0);
  EXPECT_DOUBLE_EQ(accuracy(picked({1, 2, 3, 9, 10}), truth), 0.6);
  EXPECT_DOUBLE_EQ(accuracy(picked({1, 2}), truth), 0.4);
  EXPECT_THROW(accuracy(picked({1, 2, 3, 4, 5, 6}), truth), std::invalid_argument);
  EXPECT_THROW(accuracy(picked({}), truth), std::invalid_argument);
}

TEST(ContrastTest, Examples) {
  const std::vector<double> flat(8, 0.3);
  const auto c = contrastivity(flat, 3);
  EXPECT_DOUBLE_EQ(c.ratio, 1.0);
  EXPECT_DOUBLE_EQ(c.diff, 0.0);
  const std::vector<double> split = {10, 2, 10, 2, 10, 2};
  const auto d = contrastivity(split, 3);
  EXPECT_DOUBLE_EQ(d.ratio, 5.0);
  EXPECT_DOUBLE_EQ(d.diff, 8.0);
  const std::vector<double> scaled = {25, 5, 25, 5, 25, 5};
  EXPECT_DOUBLE_EQ(contrastivity(scaled, 3).ratio, d.ratio);
  const std::vector<double> zeros = {1, 0, 0};
  EXPECT_TRUE(std::isinf(contrastivity(zeros, 1).ratio));
  EXPECT_THROW(contrastivity(zeros, 3), std::invalid_argument);
}

GcnConfig node_config() {
  GcnConfig gc;
  gc.input_dim = 2;
  gc.num_classes = 2;
  return gc;
}

TEST(FidelityTest, WholeDomainAndFarNodes) {
  const Graph g = path_graph(8, 2);
  const auto model = ReferenceGcn::initialize(node_config(), 3);
  const auto dom = translate(g, 0, 3);
  EXPECT_EQ(fidelity(g, 0, picked(dom.nodes), model, 3), 0.0);
  // The domain is 0..3; naming nodes outside it keeps only the center.
  const double only_center = fidelity(g, 0, picked({}), model, 3);
  EXPECT_EQ(fidelity(g, 0, picked({5, 6, 7}), model, 3), only_center);
  EXPECT_GE(only_center, 0.0);
  EXPECT_LE(only_center, 1.0);
}

class EvaluateTest : public ::testing::Test {
 protected:
  void SetUp() override {
    auto spec = DatasetSpec::defaults(DatasetKind::kTreeCycle);
    spec.tree_depth = 4;
    spec.motif_count = 4;
    spec.seed = 2;
    graph_ = generate(spec);
    GcnConfig gc;
    gc.input_dim = graph_.feature_dim();
    gc.num_classes = 2;
    model_ = std::make_unique<ReferenceGcn>(ReferenceGcn::initialize(gc, 1));
    cfg_.explain.perturbation.samples = 60;
    cfg_.explain.fit.epochs = 40;
    cfg_.seed = 3;
  }
  Graph graph_;
  std::unique_ptr<ReferenceGcn> model_;
  EvalConfig cfg_;
};

TEST_F(EvaluateTest, ReportShape) {
  const auto report = evaluate(graph_, *model_, cfg_);
  EXPECT_EQ(report.nodes.size(), 24u);
  EXPECT_EQ(report.summary.size(), 16u);
  const auto& acc = report.find("random", "accuracy");
  EXPECT_GT(acc.mean, 0.0);
  EXPECT_LE(acc.mean, 1.0);
  EXPECT_EQ(acc.n_nodes, 24);
  const auto csv = report.csv();
  EXPECT_EQ(csv.rfind("dataset,method,metric,mean,std,n_nodes,seed\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 17);
}

TEST_F(EvaluateTest, EmptyMethodList) {
  cfg_.methods.clear();
  const auto report = evaluate(graph_, *model_, cfg_);
  EXPECT_TRUE(report.summary.empty());
  EXPECT_TRUE(report.results.empty());
}

TEST_F(EvaluateTest, SameSeedSameCsvAnyWorkers) {
  cfg_.sample = 10;
  const auto a = evaluate(graph_, *model_, cfg_);
  cfg_.workers = 3;
  const auto b = evaluate(graph_, *model_, cfg_);
  EXPECT_EQ(a.nodes.size(), 10u);
  EXPECT_EQ(a.csv(), b.csv());
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
}

TEST_F(EvaluateTest, NeedsGroundTruth) {
  Graph bare = graph_;
  bare.motif_of.reset();
  EXPECT_THROW(evaluate(bare, *model_, cfg_), GraphError);
}

}  // namespace
}  // namespace trap2
