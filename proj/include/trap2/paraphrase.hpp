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

#ifndef TRAP2_PARAPHRASE_HPP_
#define TRAP2_PARAPHRASE_HPP_

#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "trap2/explanation.hpp"
#include "trap2/graph.hpp"
#include "trap2/perturbation.hpp"
#include "trap2/predictor.hpp"
#include "trap2/translation.hpp"

namespace trap2 {

// Linear-softmax surrogate g(z) = softmax(W z) over concatenated node slots.
// Columns [q * d, (q + 1) * d) belong to domain position q.
struct SurrogateModel {
  Eigen::MatrixXd weights;  // C x (n_hat * d)
  int hops = 3;
  int n_hat = 0;
  int feature_dim = 0;
};

// Perturbed features of each domain node, zeroed when the node is no longer
// within `hops` of `center` in a_p.
Eigen::VectorXd surrogate_input(const Adjacency& a_p, const Features& x_p,
                                int hops, int center = 0);
Eigen::RowVectorXd surrogate_forward(const SurrogateModel& model,
                                     const Adjacency& a_p, const Features& x_p);

enum class WeightMode {
  kInverse,       // sample weight 1 / gamma
  kProportional,  // sample weight gamma
};

std::string_view to_string(WeightMode mode);
WeightMode parse_weight_mode(std::string_view name);

struct FitConfig {
  double l1 = 1e-3;
  int epochs = 300;
  double learning_rate = 0.01;
  // Step size is halved on a rejected step and multiplied by this after an
  // accepted one. 1.0 keeps the plain fixed-rate schedule; values above 1
  // converge faster but change which nodes a short fit favours.
  double lr_growth = 1.0;
  WeightMode weight_mode = WeightMode::kInverse;

  void validate() const;
};

nlohmann::json to_json(const FitConfig& cfg);
FitConfig fit_config_from_json(const nlohmann::json& j);

// Weighted squared error plus L1 penalty, for weights W on inputs Z (one row
// per instance) against responses F.
double surrogate_loss(const Eigen::MatrixXd& w, const Eigen::MatrixXd& inputs,
                      const Eigen::MatrixXd& responses,
                      std::span<const double> gammas, const FitConfig& cfg);

// Full-batch subgradient descent from W = 0. A step that raises the loss is
// discarded and the rate halved, so the loss never increases. Each epoch's
// loss is appended to `trace` when given.
Eigen::MatrixXd fit_weights(const Eigen::MatrixXd& inputs,
                            const Eigen::MatrixXd& responses,
                            std::span<const double> gammas,
                            const FitConfig& cfg,
                            std::vector<double>* trace = nullptr);

SurrogateModel fit(std::span<const PerturbedInstance> batch, int hops,
                   const FitConfig& cfg, std::vector<double>* trace = nullptr);

// I_j = sum of |W[target, slot]| over node j's slots.
std::vector<double> node_contributions(const SurrogateModel& model,
                                       int target_class);
// |W[target, slot]| reshaped to n_hat x d.
Eigen::MatrixXd feature_contributions(const SurrogateModel& model,
                                      int target_class);

Explanation extract(const InterpretationDomain& dom,
                    std::vector<double> node_scores,
                    Eigen::MatrixXd feature_scores, int n_select);

struct ExplainConfig {
  PerturbationConfig perturbation;
  FitConfig fit;
  // 0 selects ceil(n_hat / 4).
  int n_select = 0;
  int workers = 1;
};

nlohmann::json to_json(const ExplainConfig& cfg);

int default_selection(int n_hat);

Explanation explain_node(const Graph& g, int node, const Predictor& predictor,
                         const ExplainConfig& cfg);

// Surrogate scores of one center against graph-level responses.
struct CenterContribution {
  int center = 0;
  std::vector<int> nodes;  // domain, original indices
  std::vector<double> node_scores;
  Eigen::MatrixXd feature_scores;
};

// Runs the per-node machinery around `center` with the graph head's
// responses and reads weights of `target_class`. The perturbation seed is
// mixed with the center index.
CenterContribution explain_center(const Graph& g, int center,
                                  const Predictor& predictor,
                                  const ExplainConfig& cfg, int target_class);

// Sum over centers of each node's scores divided by n, the number of nodes.
// Centers whose domain misses a node contribute 0 to it.
std::pair<std::vector<double>, Eigen::MatrixXd> pool_contributions(
    int n, int feature_dim, std::span<const CenterContribution> parts);

// Explains a graph-task prediction by pooling the per-center scores of every
// node. The target is the class predicted for the whole graph.
Explanation explain_graph(const Graph& g, const Predictor& predictor,
                          const ExplainConfig& cfg);

}  // namespace trap2

#endif  // TRAP2_PARAPHRASE_HPP_
