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

#include "trap2/baselines.hpp"

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "trap2/random.hpp"

namespace trap2 {

std::string_view to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::kRandom:
      return "random";
    case BaselineKind::kGreedy:
      return "greedy";
    case BaselineKind::kGrad:
      return "grad";
  }
  return "unknown";
}

BaselineKind parse_baseline_kind(std::string_view name) {
  for (auto k : {BaselineKind::kRandom, BaselineKind::kGreedy,
                 BaselineKind::kGrad}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown baseline '" + std::string(name) + "'");
}

Explanation random_explainer(const InterpretationDomain& dom,
                             std::uint64_t seed, int n_select) {
  Rng rng = make_stream(seed, static_cast<std::uint64_t>(dom.center));
  const int n = dom.size();
  std::vector<double> scores(static_cast<size_t>(n));
  for (auto& s : scores) s = uniform01(rng);
  Eigen::MatrixXd features(n, dom.feature_dim());
  for (Eigen::Index r = 0; r < features.rows(); ++r) {
    for (Eigen::Index c = 0; c < features.cols(); ++c) {
      features(r, c) = uniform01(rng);
    }
  }
  Explanation e = extract(dom.nodes, dom.adjacency, std::move(scores),
                          std::move(features), n_select);
  e.method = "random";
  e.config = {{"seed", seed}};
  return e;
}

Explanation greedy_explainer(const InterpretationDomain& dom,
                             const Predictor& predictor, int n_select,
                             const GreedyOptions& opts) {
  return greedy_explainer(dom, predictor,
                          predictor.response(dom.adjacency, dom.features, 0),
                          n_select, opts);
}

Explanation greedy_explainer(const InterpretationDomain& dom,
                             const Predictor& predictor,
                             const Eigen::RowVectorXd& baseline, int n_select,
                             const GreedyOptions& opts) {
  const int n = dom.size();
  const int target = argmax(baseline);
  std::vector<double> scores(static_cast<size_t>(n), 0.0);
  scores[0] = std::numeric_limits<double>::infinity();
  for (int j = 1; j < n; ++j) {
    Eigen::RowVectorXd masked;
    if (opts.remove_node) {
      std::vector<int> keep;
      for (int q = 0; q < n; ++q) {
        if (q != j) keep.push_back(q);
      }
      masked = predictor.response(induced_submatrix(dom.adjacency, keep),
                                  select_rows(dom.features, keep), 0);
    } else {
      Adjacency a = dom.adjacency;
      a.row(j).setZero();
      a.col(j).setZero();
      masked = predictor.response(a, dom.features, 0);
    }
    scores[static_cast<size_t>(j)] = baseline[target] - masked[target];
  }
  Explanation e =
      extract(dom.nodes, dom.adjacency, std::move(scores),
              Eigen::MatrixXd::Zero(n, dom.feature_dim()), n_select);
  e.method = "greedy";
  e.target_class = target;
  e.config = {{"remove_node", opts.remove_node}};
  return e;
}

Explanation grad_explainer(const InterpretationDomain& dom,
                           const Predictor& predictor, int target_class,
                           int n_select, const GradOptions& opts) {
  if (!predictor.supports_gradients()) throw GradientUnsupported();
  const auto grads =
      predictor.input_gradients(dom.adjacency, dom.features, target_class,
                                predictor.task() == Task::kNode
                                    ? std::optional<int>(0)
                                    : std::nullopt);
  const int n = dom.size();
  Eigen::MatrixXd features = grads.features.cwiseAbs();
  std::vector<double> scores(static_cast<size_t>(n));
  for (int q = 0; q < n; ++q) {
    scores[static_cast<size_t>(q)] =
        opts.use_adjacency ? grads.adjacency.row(q).cwiseAbs().sum() +
                                 grads.adjacency.col(q).cwiseAbs().sum()
                           : features.row(q).sum();
  }
  Explanation e = extract(dom.nodes, dom.adjacency, std::move(scores),
                          std::move(features), n_select);
  e.method = "grad";
  e.target_class = target_class;
  e.config = {{"use_adjacency", opts.use_adjacency}};
  return e;
}

}  // namespace trap2
