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

#ifndef TRAP2_PREDICTOR_HPP_
#define TRAP2_PREDICTOR_HPP_

#include <optional>
#include <stdexcept>
#include <string_view>

#include <Eigen/Dense>

#include "trap2/graph.hpp"

namespace trap2 {

enum class Task { kNode, kGraph };

std::string_view to_string(Task task);
Task parse_task(std::string_view name);

// Thrown when gradients are requested from a predictor that only exposes
// forward evaluation.
class GradientUnsupported : public std::runtime_error {
 public:
  GradientUnsupported()
      : std::runtime_error("predictor does not expose input gradients") {}
};

// Gradients of the cross-entropy loss at a target class.
struct InputGradients {
  Eigen::MatrixXd features;   // n x d
  Eigen::MatrixXd adjacency;  // n x n, w.r.t. a real-valued copy of A
};

// The black box being explained: f(A, X) -> class probabilities.
//
// Implementations must be safe to call concurrently from several threads.
class Predictor {
 public:
  virtual ~Predictor() = default;

  virtual Task task() const = 0;
  virtual int num_classes() const = 0;
  // Number of message-passing rounds; bounds the receptive field.
  virtual int depth() const = 0;
  virtual int feature_dim() const = 0;

  // n x C for node tasks, 1 x C for graph tasks. Rows are distributions.
  virtual Eigen::MatrixXd predict(const Adjacency& a,
                                  const Features& x) const = 0;

  virtual bool supports_gradients() const { return false; }

  // `node` selects the loss term for node tasks and is ignored otherwise.
  virtual InputGradients input_gradients(const Adjacency& a, const Features& x,
                                         int target,
                                         std::optional<int> node) const {
    (void)a, (void)x, (void)target, (void)node;
    throw GradientUnsupported();
  }

  // The probability row that explanations read: node `node` for node tasks,
  // the pooled row for graph tasks.
  Eigen::RowVectorXd response(const Adjacency& a, const Features& x,
                              int node) const {
    const Eigen::MatrixXd p = predict(a, x);
    return task() == Task::kNode ? Eigen::RowVectorXd(p.row(node))
                                 : Eigen::RowVectorXd(p.row(0));
  }
};

// Index of the largest entry; the lowest index wins ties.
int argmax(const Eigen::RowVectorXd& row);

}  // namespace trap2

#endif  // TRAP2_PREDICTOR_HPP_
