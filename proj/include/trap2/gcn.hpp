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

#ifndef TRAP2_GCN_HPP_
#define TRAP2_GCN_HPP_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "trap2/graph.hpp"
#include "trap2/predictor.hpp"

namespace trap2 {

enum class Aggregation {
  kSymmetric,  // D^-1/2 (A + I) D^-1/2
  kSum,        // A + I
};

struct GcnConfig {
  Task task = Task::kNode;
  Aggregation aggregation = Aggregation::kSum;
  // Adds a separate self transform H W_self to every layer.
  bool self_weight = true;
  int input_dim = 10;
  int hidden = 20;
  int num_classes = 2;
  int depth = 3;

  void validate() const;
};

struct GcnParameters {
  std::vector<Eigen::MatrixXd> weights;     // depth matrices
  std::vector<Eigen::RowVectorXd> biases;   // depth rows
  std::vector<Eigen::MatrixXd> self_weights;  // empty unless self_weight
  Eigen::MatrixXd head_weight;              // (depth * hidden) x C
  Eigen::RowVectorXd head_bias;             // C
};

enum class Optimizer { kGradientDescent, kAdam };

struct TrainConfig {
  Optimizer optimizer = Optimizer::kAdam;
  int epochs = 6000;
  double learning_rate = 0.01;
  double weight_decay = 0.005;
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
};

struct TrainReport {
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  double final_loss = 0.0;
  int epochs = 0;
  std::vector<int> train_items;
  std::vector<int> test_items;
};

// Reference message-passing classifier.
//
// Each layer computes H' = relu(S H W + H W_self + b), where S is A + I (sum
// aggregation, the default) or D^-1/2 (A + I) D^-1/2. With sum aggregation a
// node's output on its induced depth-hop ball equals its output on the whole
// graph. The head reads the concatenation of all layer outputs, per node for node
// tasks and mean-pooled over nodes for graph tasks, followed by softmax.
class ReferenceGcn final : public Predictor {
 public:
  static ReferenceGcn zeros(const GcnConfig& config);
  // Glorot-uniform weights, zero biases.
  static ReferenceGcn initialize(const GcnConfig& config, std::uint64_t seed);

  Task task() const override { return config_.task; }
  int num_classes() const override { return config_.num_classes; }
  int depth() const override { return config_.depth; }
  int feature_dim() const override { return config_.input_dim; }

  Eigen::MatrixXd predict(const Adjacency& a, const Features& x) const override;

  bool supports_gradients() const override { return true; }
  InputGradients input_gradients(const Adjacency& a, const Features& x,
                                 int target,
                                 std::optional<int> node) const override;

  // Same as predict, with a real-valued adjacency (used for derivative
  // checks).
  Eigen::MatrixXd predict_relaxed(const Eigen::MatrixXd& a,
                                  const Features& x) const;

  const GcnConfig& config() const { return config_; }
  const GcnParameters& parameters() const { return params_; }
  GcnParameters& mutable_parameters() { return params_; }

  nlohmann::json to_json() const;
  static ReferenceGcn from_json(const nlohmann::json& j);

 private:
  explicit ReferenceGcn(GcnConfig config) : config_(config) {}

  void check_input(Eigen::Index n, const Features& x) const;

  GcnConfig config_;
  GcnParameters params_;

  friend TrainReport train(ReferenceGcn&, const Graph&, const TrainConfig&);
  friend TrainReport train(ReferenceGcn&, std::span<const Graph>,
                           const TrainConfig&);
};

// Full-batch optimization (Adam or plain gradient descent) of mean
// cross-entropy over a seeded train split
// of the labelled nodes.
TrainReport train(ReferenceGcn& model, const Graph& g, const TrainConfig& cfg);
// Graph-task variant over a collection of labelled graphs.
TrainReport train(ReferenceGcn& model, std::span<const Graph> graphs,
                  const TrainConfig& cfg);

// Accuracy of argmax predictions over the listed nodes.
double node_accuracy(const Predictor& model, const Graph& g,
                     std::span<const int> nodes);

// Hides the gradient path of another predictor.
class BlackBoxPredictor final : public Predictor {
 public:
  explicit BlackBoxPredictor(std::shared_ptr<const Predictor> inner)
      : inner_(std::move(inner)) {}

  Task task() const override { return inner_->task(); }
  int num_classes() const override { return inner_->num_classes(); }
  int depth() const override { return inner_->depth(); }
  int feature_dim() const override { return inner_->feature_dim(); }
  Eigen::MatrixXd predict(const Adjacency& a, const Features& x) const override {
    return inner_->predict(a, x);
  }

 private:
  std::shared_ptr<const Predictor> inner_;
};

void save_model(const ReferenceGcn& model, const std::filesystem::path& path,
                bool black_box = false);
ReferenceGcn load_reference_model(const std::filesystem::path& path);
// Honors the "black_box" flag of the model file.
std::shared_ptr<const Predictor> load_predictor(
    const std::filesystem::path& path);

}  // namespace trap2

#endif  // TRAP2_GCN_HPP_
