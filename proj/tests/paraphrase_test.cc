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

#include "trap2/paraphrase.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "test_util.hpp"
#include "trap2/gcn.hpp"

namespace trap2 {
namespace {

using testing::path_graph;
using testing::random_graph;

SurrogateModel model_with(Eigen::MatrixXd w, int n_hat, int d) {
  SurrogateModel m;
  m.weights = std::move(w);
  m.n_hat = n_hat;
  m.feature_dim = d;
  return m;
}

TEST(SurrogateInputTest, UnperturbedDomainFlattensFeatures) {
  std::mt19937_64 rng(1);
  const Graph g = random_graph(rng, 12, 0.3, 3);
  const auto dom = translate(g, 0, 3);
  const Eigen::VectorXd z = surrogate_input(dom.adjacency, dom.features, 3);
  for (int q = 0; q < dom.size(); ++q) {
    EXPECT_EQ(z.segment(q * 3, 3), dom.features.row(q).transpose());
  }
}

TEST(SurrogateInputTest, DisconnectedNodeIsGatedOut) {
  const auto dom = translate(path_graph(4, 2), 0, 3);
  Adjacency a = dom.adjacency;
  a(1, 2) = a(2, 1) = 0;
  const Eigen::VectorXd z = surrogate_input(a, dom.features, 3);
  EXPECT_EQ(z.segment(0, 4), Eigen::VectorXd::Ones(4));
  EXPECT_TRUE(z.segment(4, 4).isZero(0.0));
  Features one(1, 2);
  one << 2.0, -1.0;
  EXPECT_EQ(surrogate_input(Adjacency::Zero(1, 1), one, 3),
            one.row(0).transpose());
}

TEST(SurrogateForwardTest, ZeroWeightsAndSaturation) {
  const auto dom = translate(path_graph(3, 2), 0, 2);
  const auto zero = model_with(Eigen::MatrixXd::Zero(4, 6), 3, 2);
  EXPECT_TRUE(surrogate_forward(zero, dom.adjacency, dom.features)
                  .isApproxToConstant(0.25, 1e-15));
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2, 6);
  w(0, 0) = 400.0;
  w(1, 0) = -400.0;
  const auto p = surrogate_forward(model_with(w, 3, 2), dom.adjacency,
                                   dom.features);
  EXPECT_NEAR(p[0], 1.0, 1e-15);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd r = Eigen::MatrixXd::NullaryExpr(3, 6, [&] { return normal(rng); });
  const auto p1 = surrogate_forward(model_with(r, 3, 2), dom.adjacency, dom.features);
  const auto p2 =
      surrogate_forward(model_with(2 * r, 3, 2), dom.adjacency, dom.features);
  EXPECT_EQ(argmax(p1), argmax(p2));
  EXPECT_GE(p2.maxCoeff(), p1.maxCoeff());
}

TEST(ContributionTest, Examples) {
  auto ones = model_with(Eigen::MatrixXd::Ones(2, 12), 4, 3);
  EXPECT_EQ(node_contributions(ones, 1), (std::vector<double>(4, 3.0)));
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2, 12);
  w(0, 9) = -2.5;
  EXPECT_EQ(node_contributions(model_with(w, 4, 3), 0),
            (std::vector<double>{0, 0, 0, 2.5}));
  Eigen::MatrixXd v(1, 2);
  v << -2.0, 1.0;
  EXPECT_EQ(node_contributions(model_with(v, 1, 2), 0), (std::vector<double>{3}));
  EXPECT_THROW(node_contributions(model_with(v, 1, 2), 1), std::invalid_argument);
}

TEST(ExtractTest, Examples) {
  const auto dom = translate(path_graph(3, 2), 0, 2);
  const Eigen::MatrixXd fs = Eigen::MatrixXd::Ones(3, 2);
  auto e = extract(dom, {3, 1, 2}, fs, 2);
  EXPECT_EQ(e.selected_nodes, (std::vector<int>{0, 2}));
  EXPECT_TRUE(e.selected_edges.empty());
  e = extract(dom, {1, 1, 1}, fs, 2);
  EXPECT_EQ(e.selected_nodes, (std::vector<int>{0, 1}));
  EXPECT_EQ(e.selected_edges, (std::vector<std::pair<int, int>>{{0, 1}}));
  e = extract(dom, {5, 1, 2}, fs, 3);
  EXPECT_EQ(e.selected_edges.size(), 2u);
  EXPECT_THROW(extract(dom, {1, 1, 1}, fs, 0), std::invalid_argument);
  EXPECT_THROW(extract(dom, {1, 1, 1}, fs, 4), std::invalid_argument);
  // Positive rescaling never changes the pick.
  const std::vector<double> s = {0.2, 0.9, 0.4};
  std::vector<double> t = s;
  for (auto& x : t) x *= 7.5;
  EXPECT_EQ(extract(dom, s, fs, 2).selected_nodes,
            extract(dom, t, fs, 2).selected_nodes);
}

TEST(FitTest, HugePenaltyKeepsWeightsNearZero) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal;
  const Eigen::MatrixXd z = Eigen::MatrixXd::NullaryExpr(50, 6, [&] { return normal(rng); });
  Eigen::MatrixXd f(50, 2);
  for (int j = 0; j < 50; ++j) {
    const double p = 1.0 / (1.0 + std::exp(-z(j, 0)));
    f.row(j) << p, 1 - p;
  }
  const std::vector<double> gammas(50, 1.0);
  FitConfig cfg;
  cfg.l1 = 1e6;
  EXPECT_LT(fit_weights(z, f, gammas, cfg).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(FitTest, UniformTargetsLeaveZeroWeights) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  const Eigen::MatrixXd z = Eigen::MatrixXd::NullaryExpr(40, 5, [&] { return normal(rng); });
  const Eigen::MatrixXd f = Eigen::MatrixXd::Constant(40, 4, 0.25);
  const std::vector<double> gammas(40, 2.0);
  EXPECT_TRUE(fit_weights(z, f, gammas, FitConfig{}).isZero(0.0));
}

TEST(FitTest, LossNeverIncreases) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  const Eigen::MatrixXd z = Eigen::MatrixXd::NullaryExpr(200, 8, [&] { return normal(rng); });
  Eigen::MatrixXd f(200, 3);
  for (int j = 0; j < 200; ++j) {
    Eigen::RowVector3d s(z(j, 0), -z(j, 1), 0.5 * z(j, 2));
    s = s.array().exp();
    f.row(j) = s / s.sum();
  }
  std::vector<double> gammas(200);
  for (auto& g : gammas) g = 0.5 + std::abs(normal(rng));
  FitConfig cfg;
  cfg.learning_rate = 5.0;  // large enough to trigger rejected steps
  std::vector<double> trace;
  fit_weights(z, f, gammas, cfg, &trace);
  ASSERT_EQ(trace.size(), 300u);
  for (size_t i = 1; i < trace.size(); ++i) EXPECT_LE(trace[i], trace[i - 1]);
}

TEST(FitTest, RejectsBadBatches) {
  const Eigen::MatrixXd z = Eigen::MatrixXd::Ones(2, 2);
  const Eigen::MatrixXd f = Eigen::MatrixXd::Constant(2, 2, 0.5);
  EXPECT_THROW(fit_weights(Eigen::MatrixXd(0, 2), Eigen::MatrixXd(0, 2), {},
                           FitConfig{}),
               std::invalid_argument);
  const std::vector<double> bad = {1.0, 0.0};
  EXPECT_THROW(fit_weights(z, f, bad, FitConfig{}), std::invalid_argument);
}

TEST(FitTest, SlotZeroLemma) {
  // Node 2 never reachable and node 1 has zero features: their slots never
  // receive input and must stay exactly zero.
  Graph g = path_graph(4, 3);
  g.features.row(1).setZero();
  g.adjacency(1, 2) = g.adjacency(2, 1) = 0;
  g.adjacency(0, 2) = g.adjacency(2, 0) = 0;
  g.adjacency(2, 3) = g.adjacency(3, 2) = 1;
  g.adjacency(1, 3) = g.adjacency(3, 1) = 1;
  // 0-1-3-2: node 2 is 3 hops away, so a 2-hop gate never opens for it.
  const auto dom = translate(g, 0, 3);
  GcnConfig gc;
  gc.input_dim = 3;
  gc.num_classes = 3;
  const auto model = ReferenceGcn::initialize(gc, 1);
  PerturbationConfig cfg;
  cfg.hops = 2;
  cfg.samples = 300;
  const auto batch = sample_batch(dom, model, cfg);
  const auto sm = fit(batch, 2, FitConfig{});
  const int p1 = dom.position_of(1), p2 = dom.position_of(2);
  EXPECT_TRUE(sm.weights.middleCols(p1 * 3, 3).isZero(0.0));
  EXPECT_TRUE(sm.weights.middleCols(p2 * 3, 3).isZero(0.0));
  EXPECT_FALSE(sm.weights.middleCols(0, 3).isZero(0.0));
  for (int c = 0; c < 3; ++c) {
    const auto I = node_contributions(sm, c);
    EXPECT_EQ(I[static_cast<size_t>(p2)], 0.0);
    EXPECT_NEAR(std::accumulate(I.begin(), I.end(), 0.0),
                sm.weights.row(c).cwiseAbs().sum(), 1e-12);
  }
}

// Responses produced by a known surrogate W*; refitting must recover the
// order of the strongest half of its nodes.
TEST(FitTest, PlantedSurrogateRecovery) {
  // Responses come from a known W*. Feature magnitudes stay away from zero so
  // every weight is identifiable, and node scales are evenly spaced so the
  // top half is separated. The fit gets 10000 epochs; the default 300 leaves
  // the larger domains short of convergence.
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> magnitude(0.5, 1.5);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 6 + trial;
    Graph g = random_graph(rng, n, 0.35, 3);
    for (Eigen::Index i = 0; i < g.features.size(); ++i) {
      g.features(i) = (rng() % 2 ? 1.0 : -1.0) * magnitude(rng);
    }
    const auto dom = translate(g, 0, 3);
    const int n_hat = dom.size();
    ASSERT_LE(n_hat, 30);
    const int d = 3;
    std::vector<int> perm(static_cast<size_t>(n_hat));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Eigen::MatrixXd w(2, n_hat * d);
    for (int q = 0; q < n_hat; ++q) {
      const double scale = 1.0 + perm[static_cast<size_t>(q)];
      for (int c = 0; c < d; ++c) {
        const double v = scale * ((q + c) % 2 ? 1.0 : -1.0);
        w(0, q * d + c) = v;
        w(1, q * d + c) = -v;
      }
    }
    PerturbationConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(trial);
    Eigen::MatrixXd z(cfg.samples, n_hat * d);
    std::vector<PerturbedInstance> batch;
    for (int j = 0; j < cfg.samples; ++j) {
      batch.push_back(draw_instance(dom, cfg, j));
      z.row(j) = surrogate_input(batch.back().adjacency, batch.back().features, 3).transpose();
    }
    // Scale so the realized logits have RMS 0.75 per class. Without a bias the
    // fixed features can push every logit one way and saturate the softmax.
    const Eigen::VectorXd logits = z * w.row(0).transpose();
    const double rms = std::sqrt(logits.squaredNorm() / static_cast<double>(logits.size()));
    ASSERT_GT(rms, 0.0);
    w *= 0.75 / rms;
    const auto planted = model_with(w, n_hat, d);
    Eigen::MatrixXd f(cfg.samples, 2);
    std::vector<double> gammas;
    for (int j = 0; j < cfg.samples; ++j) {
      const auto& inst = batch[static_cast<size_t>(j)];
      f.row(j) = surrogate_forward(planted, inst.adjacency, inst.features);
      gammas.push_back(inst.gamma);
    }
    FitConfig fc;
    fc.epochs = 10000;
    const auto fitted = model_with(fit_weights(z, f, gammas, fc), n_hat, d);
    const auto want = rank_positions(dom.nodes, node_contributions(planted, 0));
    const auto got = rank_positions(dom.nodes, node_contributions(fitted, 0));
    const int top = (n_hat + 1) / 2;
    EXPECT_TRUE(std::equal(want.begin(), want.begin() + top, got.begin()))
        << "trial " << trial << " n_hat " << n_hat;
  }
}

TEST(FitTest, GrowingStepStillMonotone) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> normal;
  const Eigen::MatrixXd z = Eigen::MatrixXd::NullaryExpr(100, 4, [&] { return normal(rng); });
  Eigen::MatrixXd f = Eigen::MatrixXd::Constant(100, 2, 0.5);
  f.col(0) = (z.col(0).array().tanh() + 1.0) / 2.0;
  f.col(1) = 1.0 - f.col(0).array();
  FitConfig cfg;
  cfg.lr_growth = 1.5;
  cfg.learning_rate = 2.0;
  std::vector<double> trace;
  fit_weights(z, f, std::vector<double>(100, 1.0), cfg, &trace);
  for (size_t i = 1; i < trace.size(); ++i) EXPECT_LE(trace[i], trace[i - 1]);
  EXPECT_LT(trace.back(), trace.front());
  cfg.lr_growth = 0.9;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

GcnConfig tiny(Task task) {
  GcnConfig gc;
  gc.task = task;
  gc.input_dim = 2;
  gc.num_classes = 3;
  return gc;
}

TEST(ExplainNodeTest, IsolatedNode) {
  Graph g = path_graph(3, 2);
  g.adjacency.row(2).setZero();
  g.adjacency.col(2).setZero();
  const auto model = ReferenceGcn::initialize(tiny(Task::kNode), 1);
  ExplainConfig cfg;
  cfg.perturbation.samples = 50;
  const auto e = explain_node(g, 2, model, cfg);
  EXPECT_EQ(e.selected_nodes, (std::vector<int>{2}));
  EXPECT_EQ(e.domain_nodes, (std::vector<int>{2}));
}

TEST(ExplainNodeTest, DeterministicAcrossRunsAndWorkers) {
  std::mt19937_64 rng(8);
  const Graph g = random_graph(rng, 25, 0.12, 2);
  const auto model = ReferenceGcn::initialize(tiny(Task::kNode), 3);
  ExplainConfig cfg;
  cfg.perturbation.samples = 200;
  cfg.perturbation.seed = 4;
  const auto a = explain_node(g, 5, model, cfg);
  cfg.workers = 4;
  const auto b = explain_node(g, 5, model, cfg);
  EXPECT_EQ(to_json(a), to_json(b));
  EXPECT_EQ(a.node_scores, b.node_scores);
  for (size_t q = 0; q < a.node_scores.size(); ++q) {
    EXPECT_NEAR(a.node_scores[q],
                a.feature_scores.row(static_cast<Eigen::Index>(q)).sum(), 1e-12);
  }
  EXPECT_THROW(explain_graph(g, model, cfg), std::invalid_argument);
}

TEST(PoolTest, Arithmetic) {
  CenterContribution a, b;
  a.nodes = {0, 1};
  a.node_scores = {2.0, 4.0};
  a.feature_scores = Eigen::MatrixXd::Ones(2, 1);
  b.nodes = {1, 2};
  b.node_scores = {1.0, 3.0};
  b.feature_scores = Eigen::MatrixXd::Ones(2, 1);
  const std::vector<CenterContribution> parts = {a, b};
  const auto [nodes, features] = pool_contributions(4, 1, parts);
  EXPECT_EQ(nodes, (std::vector<double>{0.5, 1.25, 0.75, 0.0}));
  EXPECT_EQ(features(1, 0), 0.5);
}

TEST(ExplainGraphTest, SingleNodeGraphPoolsToItself) {
  const Graph g = path_graph(1, 2);
  const auto model = ReferenceGcn::initialize(tiny(Task::kGraph), 5);
  ExplainConfig cfg;
  cfg.perturbation.samples = 60;
  const auto e = explain_graph(g, model, cfg);
  const int target = argmax(model.response(g.adjacency, g.features, 0));
  const auto part = explain_center(g, 0, model, cfg, target);
  EXPECT_EQ(e.node_scores, part.node_scores);
  EXPECT_EQ(e.center, -1);
}

TEST(ExplainGraphTest, ComponentsStaySeparate) {
  // Triangle 0-1-2 and an edge 3-4.
  const std::vector<std::pair<int, int>> edges = {{0, 1}, {1, 2}, {0, 2}, {3, 4}};
  std::mt19937_64 rng(6);
  std::normal_distribution<double> normal;
  const Graph g = Graph::from_edges(
      5, edges, Features::NullaryExpr(5, 2, [&] { return normal(rng); }));
  const auto model = ReferenceGcn::initialize(tiny(Task::kGraph), 6);
  ExplainConfig cfg;
  cfg.perturbation.samples = 80;
  const int target = argmax(model.response(g.adjacency, g.features, 0));
  for (int i = 0; i < 5; ++i) {
    const auto part = explain_center(g, i, model, cfg, target);
    for (int v : part.nodes) EXPECT_EQ(v < 3, i < 3);
  }
}

}  // namespace
}  // namespace trap2
