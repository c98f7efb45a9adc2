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

#ifndef TRAP2_SYNTHETIC_HPP_
#define TRAP2_SYNTHETIC_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "trap2/graph.hpp"

namespace trap2 {

enum class DatasetKind { kBaShapes, kBaCommunity, kTreeCycle, kTreeGrid };

std::string_view to_string(DatasetKind kind);
// Throws std::invalid_argument for unknown names.
DatasetKind parse_dataset_kind(std::string_view name);

struct DatasetSpec {
  DatasetKind kind = DatasetKind::kBaShapes;
  std::uint64_t seed = 0;
  // Barabasi-Albert base size; one per community for ba-community.
  int base_nodes = 300;
  // Depth of the balanced binary tree (root at level 0) for tree-* kinds.
  int tree_depth = 8;
  // Motif instances; per community for ba-community.
  int motif_count = 80;
  // Random extra edges, as a fraction of the node count.
  double noise_edge_fraction = 0.01;
  int feature_dim = 10;
  // Edges added per new node while growing the BA base.
  int ba_edges_per_node = 5;

  static DatasetSpec defaults(DatasetKind kind);
  void validate() const;
};

nlohmann::json to_json(const DatasetSpec& spec);
// Fields absent from `j` keep the defaults of the given kind.
DatasetSpec dataset_spec_from_json(const nlohmann::json& j);

// Number of nodes in one motif instance: 5 (house), 6 (cycle) or 9 (grid).
int motif_size(DatasetKind kind);
int num_classes(DatasetKind kind);

Graph generate(const DatasetSpec& spec);

// All nodes sharing node i's motif instance, ascending.
std::vector<int> ground_truth_motif(const Graph& g, int i);

// Nodes that belong to some motif instance, ascending.
std::vector<int> motif_nodes(const Graph& g);

}  // namespace trap2

#endif  // TRAP2_SYNTHETIC_HPP_
