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

#ifndef TRAP2_PERTURBATION_HPP_
#define TRAP2_PERTURBATION_HPP_

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "trap2/graph.hpp"
#include "trap2/predictor.hpp"
#include "trap2/random.hpp"
#include "trap2/translation.hpp"

namespace trap2 {

enum class StructurePattern { kAdding, kRemoving, kAddingAndRemoving, kNone };
enum class FeaturePattern { kMasking, kScaling, kNone };

std::string_view to_string(StructurePattern p);
std::string_view to_string(FeaturePattern p);
StructurePattern parse_structure_pattern(std::string_view name);
FeaturePattern parse_feature_pattern(std::string_view name);

struct PerturbationConfig {
  StructurePattern structure = StructurePattern::kRemoving;
  FeaturePattern feature = FeaturePattern::kMasking;
  double p1 = 0.5;  // edge keep probability
  double p2 = 0.8;  // feature keep probability
  // Edges between the center and its neighbours are never touched.
  bool protect_one_hop = true;
  int samples = 1500;
  int hops = 3;
  double delta = 25.0;
  double lambda_a = 1.0;
  double lambda_x = 1.0;
  std::uint64_t seed = 0;
  // Puts cosine similarity, not cosine distance, inside the kernel.
  bool literal_cosine = false;
  // Divides the feature energy by the domain size.
  bool normalize_feature_energy = false;

  void validate() const;
};

nlohmann::json to_json(const PerturbationConfig& cfg);
// Missing fields keep their defaults.
PerturbationConfig perturbation_config_from_json(const nlohmann::json& j);

struct PerturbedInstance {
  Adjacency adjacency;
  Features features;
  double gamma = 0.0;
  Eigen::RowVectorXd response;
};

Adjacency perturb_structure(const InterpretationDomain& dom,
                            const PerturbationConfig& cfg, Rng& rng);
Features perturb_features(const InterpretationDomain& dom,
                          const PerturbationConfig& cfg, Rng& rng);

// alpha = softmax(w) with w_k = K / (k + 1), k = 1..K.
Eigen::VectorXd hop_weights(int hops);

// 1 - cos(u, v); 1 when exactly one side is zero, 0 when both are.
double cosine_distance(const Eigen::VectorXd& u, const Eigen::VectorXd& v);
// exp(-d^2 / delta^2) with d the cosine distance, or the cosine similarity
// when `literal` is set.
double sim(const Eigen::VectorXd& u, const Eigen::VectorXd& v, double delta,
           bool literal = false);

// Weighted similarity of the center's reachability rows, hops 1..K.
double energy_structure(const InterpretationDomain& dom, const Adjacency& a_p,
                        int hops, double delta, bool literal = false);
// Sum over domain nodes of row similarity (mean when `normalize`).
double energy_feature(const InterpretationDomain& dom, const Features& x_p,
                      double delta, bool literal = false,
                      bool normalize = false);
double energy_total(double gamma_a, double gamma_x, double lambda_a,
                    double lambda_x);

// Instance j of the batch, without the model response. Uses its own stream
// of cfg.seed, so any subset can be drawn in any order.
PerturbedInstance draw_instance(const InterpretationDomain& dom,
                                const PerturbationConfig& cfg, int j);

std::vector<PerturbedInstance> sample_batch(const InterpretationDomain& dom,
                                            const Predictor& predictor,
                                            const PerturbationConfig& cfg,
                                            int workers = 1);

}  // namespace trap2

#endif  // TRAP2_PERTURBATION_HPP_
