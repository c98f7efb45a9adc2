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

#ifndef TRAP2_BASELINES_HPP_
#define TRAP2_BASELINES_HPP_

#include <cstdint>
#include <string_view>

#include <Eigen/Dense>

#include "trap2/explanation.hpp"
#include "trap2/predictor.hpp"
#include "trap2/translation.hpp"

namespace trap2 {

enum class BaselineKind { kRandom, kGreedy, kGrad };

std::string_view to_string(BaselineKind kind);
BaselineKind parse_baseline_kind(std::string_view name);

// Uniform(0, 1) node and feature scores.
Explanation random_explainer(const InterpretationDomain& dom,
                             std::uint64_t seed, int n_select);

struct GreedyOptions {
  // Drop the candidate from the domain instead of cutting its edges.
  bool remove_node = false;
};

// Scores each non-center node by how much the center's predicted-class
// probability falls when that node is masked. The center scores +inf.
Explanation greedy_explainer(const InterpretationDomain& dom,
                             const Predictor& predictor, int n_select,
                             const GreedyOptions& opts = {});
// Same, reusing the unmasked response row; costs n_hat - 1 predictions.
Explanation greedy_explainer(const InterpretationDomain& dom,
                             const Predictor& predictor,
                             const Eigen::RowVectorXd& baseline, int n_select,
                             const GreedyOptions& opts = {});

struct GradOptions {
  // Score nodes by their adjacency-gradient row and column instead.
  bool use_adjacency = false;
};

// Node score: L1 norm of the loss gradient on the node's feature row.
// Throws GradientUnsupported for black-box predictors.
Explanation grad_explainer(const InterpretationDomain& dom,
                           const Predictor& predictor, int target_class,
                           int n_select, const GradOptions& opts = {});

}  // namespace trap2

#endif  // TRAP2_BASELINES_HPP_
