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

#include "trap2/gcn.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "test_util.hpp"
#include "trap2/synthetic.hpp"

namespace trap2 {
namespace {

using testing::path_graph;
using testing::random_graph;

GcnConfig small_config(Task task, Aggregation agg) {
  GcnConfig cfg;
  cfg.task = task;
  cfg.aggregation = agg;
  cfg.input_dim = 3;
  cfg.hidden = 5;
  cfg.num_classes = 3;
  cfg.depth = 3;
  return cfg;
}

TEST(GcnTest, ZeroWeightsGiveUniformRows) {
  std::mt19937_64 rng(1);
  const Graph g = random_graph(rng, 8, 0.3, 3);
  const auto model = ReferenceGcn::zeros(small_config(Task::kNode, Aggregation::kSum));
  const Eigen::MatrixXd p = model.predict(g.adjacency, g.features);
  EXPECT_TRUE(p.isApproxToConstant(1.0 / 3.0, 1e-15));
  const auto grads = model.input_gradients(g.adjacency, g.features, 1, 2);
  EXPECT_EQ(grads.features.cwiseAbs().maxCoeff(), 0.0);
}

TEST(GcnTest, RowsAreDistributions) {
  std::mt19937_64 rng(2);
  for (auto agg : {Aggregation::kSum, Aggregation::kSymmetric}) {
    for (auto task : {Task::kNode, Task::kGraph}) {
      const auto model = ReferenceGcn::initialize(small_config(task, agg), 5);
      const Graph g = random_graph(rng, 10, 0.3, 3);
      const Eigen::MatrixXd p = model.predict(g.adjacency, g.features);
      EXPECT_EQ(p.rows(), task == Task::kNode ? 10 : 1);
      for (Eigen::Index r = 0; r < p.rows(); ++r) {
        EXPECT_NEAR(p.row(r).sum(), 1.0, 1e-6);
      }
    }
  }
}

TEST(GcnTest, IsolatedNodeSeesOnlyItself) {
  const auto model =
      ReferenceGcn::initialize(small_config(Task::kNode, Aggregation::kSum), 3);
  Graph g = path_graph(4, 3);
  g.adjacency.row(3).setZero();
  g.adjacency.col(3).setZero();
  const Eigen::RowVectorXd before = model.predict(g.adjacency, g.features).row(3);
  g.features.row(0) *= -2.0;
  const Eigen::RowVectorXd after = model.predict(g.adjacency, g.features).row(3);
  EXPECT_EQ(before, after);
  Adjacency single = Adjacency::Zero(1, 1);
  const Features x = g.features.row(3);
  EXPECT_EQ(model.predict(single, x).row(0), after);
}

TEST(GcnTest, FarNodesDoNotMatter) {
  const auto model =
      ReferenceGcn::initialize(small_config(Task::kNode, Aggregation::kSymmetric), 4);
  Graph g = path_graph(7, 3);
  const Eigen::RowVectorXd before = model.predict(g.adjacency, g.features).row(0);
  g.features.row(4).setConstant(9.0);  // 4 hops from node 0
  g.features.row(6).setConstant(-3.0);
  EXPECT_EQ(model.predict(g.adjacency, g.features).row(0), before);
  const auto grads = model.input_gradients(g.adjacency, g.features, 0, 0);
  EXPECT_EQ(grads.features.row(4).cwiseAbs().sum(), 0.0);
  EXPECT_NE(grads.features.row(3).cwiseAbs().sum(), 0.0);
}

// Cross-entropy at `target`, evaluated through the relaxed forward pass.
double loss_at(const ReferenceGcn& m, const Eigen::MatrixXd& a,
               const Features& x, int target, int node) {
  const Eigen::MatrixXd p = m.predict_relaxed(a, x);
  return -std::log(p(m.task() == Task::kNode ? node : 0, target));
}

double max_relative_error(const Eigen::MatrixXd& analytic,
                          const Eigen::MatrixXd& numeric) {
  const double scale =
      std::max(1e-6, std::max(analytic.cwiseAbs().maxCoeff(),
                              numeric.cwiseAbs().maxCoeff()));
  return (analytic - numeric).cwiseAbs().maxCoeff() / scale;
}

TEST(GcnTest, GradientsMatchCentralDifferences) {
  std::mt19937_64 rng(9);
  for (auto agg : {Aggregation::kSum, Aggregation::kSymmetric}) {
    for (auto task : {Task::kNode, Task::kGraph}) {
      const auto model = ReferenceGcn::initialize(small_config(task, agg), 21);
      const Graph g = random_graph(rng, 7, 0.4, 3);
      const int node = 2;
      const int target = 1;
      const auto grads =
          model.input_gradients(g.adjacency, g.features, target, node);
      const Eigen::MatrixXd a = g.adjacency.cast<double>();
      const double h = 1e-4;
      Eigen::MatrixXd dx(g.features.rows(), g.features.cols());
      for (Eigen::Index r = 0; r < dx.rows(); ++r) {
        for (Eigen::Index c = 0; c < dx.cols(); ++c) {
          Features up = g.features, down = g.features;
          up(r, c) += h;
          down(r, c) -= h;
          dx(r, c) = (loss_at(model, a, up, target, node) -
                      loss_at(model, a, down, target, node)) / (2 * h);
        }
      }
      Eigen::MatrixXd da(a.rows(), a.cols());
      for (Eigen::Index r = 0; r < a.rows(); ++r) {
        for (Eigen::Index c = 0; c < a.cols(); ++c) {
          Eigen::MatrixXd up = a, down = a;
          up(r, c) += h;
          down(r, c) -= h;
          da(r, c) = (loss_at(model, up, g.features, target, node) -
                      loss_at(model, down, g.features, target, node)) / (2 * h);
        }
      }
      EXPECT_LT(max_relative_error(grads.features, dx), 1e-4);
      EXPECT_LT(max_relative_error(grads.adjacency, da), 1e-4);
    }
  }
}

TEST(GcnTest, ZeroEpochsLeaveModelUnchanged) {
  Graph g = path_graph(6, 3);
  g.node_labels = std::vector<int>{0, 1, 2, 0, 1, 2};
  auto model = ReferenceGcn::initialize(small_config(Task::kNode, Aggregation::kSum), 8);
  const auto before = model.to_json();
  TrainConfig cfg;
  cfg.epochs = 0;
  train(model, g, cfg);
  EXPECT_EQ(model.to_json(), before);
}

TEST(GcnTest, TrainingNeedsLabels) {
  const Graph g = path_graph(6, 3);
  auto model = ReferenceGcn::initialize(small_config(Task::kNode, Aggregation::kSum), 8);
  EXPECT_THROW(train(model, g, TrainConfig{}), std::invalid_argument);
}

TEST(GcnTest, TrainingIsReproducible) {
  auto spec = DatasetSpec::defaults(DatasetKind::kBaShapes);
  spec.base_nodes = 60;
  spec.motif_count = 8;
  const Graph g = generate(spec);
  GcnConfig cfg;
  cfg.input_dim = g.feature_dim();
  cfg.num_classes = 4;
  TrainConfig tc;
  tc.epochs = 40;
  tc.seed = 5;
  auto m1 = ReferenceGcn::initialize(cfg, 5);
  auto m2 = ReferenceGcn::initialize(cfg, 5);
  const auto r1 = train(m1, g, tc);
  const auto r2 = train(m2, g, tc);
  EXPECT_EQ(m1.to_json(), m2.to_json());
  EXPECT_EQ(r1.final_loss, r2.final_loss);
  EXPECT_EQ(r1.test_items, r2.test_items);
}

TEST(GcnTest, SaveLoadAndBlackBox) {
  const auto model =
      ReferenceGcn::initialize(small_config(Task::kNode, Aggregation::kSymmetric), 2);
  const auto dir = std::filesystem::temp_directory_path();
  save_model(model, dir / "trap2_m.json");
  save_model(model, dir / "trap2_bb.json", true);
  const auto back = load_reference_model(dir / "trap2_m.json");
  const Graph g = path_graph(5, 3);
  EXPECT_EQ(back.predict(g.adjacency, g.features),
            model.predict(g.adjacency, g.features));
  EXPECT_TRUE(load_predictor(dir / "trap2_m.json")->supports_gradients());
  const auto bb = load_predictor(dir / "trap2_bb.json");
  EXPECT_FALSE(bb->supports_gradients());
  EXPECT_THROW(bb->input_gradients(g.adjacency, g.features, 0, 0),
               GradientUnsupported);
  EXPECT_EQ(bb->predict(g.adjacency, g.features),
            model.predict(g.adjacency, g.features));
  std::filesystem::remove(dir / "trap2_m.json");
  std::filesystem::remove(dir / "trap2_bb.json");
}

TEST(GcnTest, RejectsDimensionMismatch) {
  const auto model =
      ReferenceGcn::initialize(small_config(Task::kNode, Aggregation::kSum), 2);
  const Graph g = path_graph(4, 2);
  EXPECT_THROW(model.predict(g.adjacency, g.features), std::invalid_argument);
}

}  // namespace
}  // namespace trap2
