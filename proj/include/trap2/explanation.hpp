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

#ifndef TRAP2_EXPLANATION_HPP_
#define TRAP2_EXPLANATION_HPP_

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "trap2/graph.hpp"

namespace trap2 {

// A scored subgraph G^ = (V^, E^, X^) produced by any explainer.
//
// Scores are aligned with domain_nodes (original indices). Graph-level
// explanations use center = -1 and the whole graph as their domain.
struct Explanation {
  std::string method;
  int center = 0;
  int target_class = 0;
  std::vector<int> domain_nodes;
  std::vector<double> node_scores;
  Eigen::MatrixXd feature_scores;  // domain size x d
  std::vector<int> selected_nodes;  // best first
  std::vector<std::pair<int, int>> selected_edges;  // u < v, sorted
  // Chosen feature columns of each selected node, same order as
  // selected_nodes.
  std::vector<std::vector<int>> selected_features;
  nlohmann::json config = nlohmann::json::object();

  // Score of original node v; throws if v lies outside the domain.
  double score_of(int v) const;
};

// Node positions sorted by descending score, equal scores by ascending
// original index.
std::vector<int> rank_positions(std::span<const int> nodes,
                                std::span<const double> scores);

// Picks the top `n_select` nodes, the edges among them and, per node, the
// ceil(d / 2) highest-scoring features.
Explanation extract(std::span<const int> nodes, const Adjacency& a,
                    std::vector<double> node_scores,
                    Eigen::MatrixXd feature_scores, int n_select);

nlohmann::json to_json(const Explanation& e);
Explanation explanation_from_json(const nlohmann::json& j);
void save_explanation(const Explanation& e, const std::filesystem::path& path);
Explanation load_explanation(const std::filesystem::path& path);

// Graphviz rendering of the domain: selected nodes filled, the center
// double-circled, selected edges bold.
std::string to_dot(const Explanation& e, const Adjacency& domain_adjacency);
// Renders against the source graph, restricted to the explanation's domain.
std::string to_dot(const Explanation& e, const Graph& g);

}  // namespace trap2

#endif  // TRAP2_EXPLANATION_HPP_
