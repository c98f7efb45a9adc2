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

#ifndef TRAP2_GRAPH_HPP_
#define TRAP2_GRAPH_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace trap2 {

// Dense 0/1 adjacency. Graphs handled here stay below a few thousand nodes.
using Adjacency = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;
using Features = Eigen::MatrixXd;

// Raised for malformed graphs, files and out-of-range indices.
class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A graph G = (V, E, X) with optional supervision.
//
// Class labels are zero-based. motif_of holds the motif-instance id of each
// node, or -1 for nodes of the base graph.
struct Graph {
  Adjacency adjacency;
  Features features;
  std::optional<std::vector<int>> node_labels;
  std::optional<int> graph_label;
  std::optional<std::vector<int>> motif_of;
  bool directed = false;

  int num_nodes() const { return static_cast<int>(adjacency.rows()); }
  int feature_dim() const { return static_cast<int>(features.cols()); }

  // Checks every structural invariant and throws GraphError on violation.
  void validate() const;

  // Builds a graph from an edge list. Undirected edges are mirrored.
  static Graph from_edges(int n, std::span<const std::pair<int, int>> edges,
                          Features features, bool directed = false);

  friend bool operator==(const Graph& a, const Graph& b);
};

// Number of edges, counting each undirected edge once.
int edge_count(const Adjacency& a);

// Throws GraphError unless `a` is square with entries in {0, 1}.
void check_binary(const Adjacency& a);

// Breadth-first hop distance from `source`, truncated at `max_hops`.
// Unreachable (or farther) nodes get -1.
std::vector<int> hop_distances(const Adjacency& a, int source, int max_hops);

// Row `source` of the k-hop reachability matrix: mask[j] = 1 iff j is within
// k hops of source. The source itself is always reachable.
std::vector<std::uint8_t> reachable_within(const Adjacency& a, int source,
                                           int k);

// The k-hop reachability matrix [A^k]; entry (i, i) is always 1.
Adjacency reachability(const Adjacency& a, int k);

// [A]_{nodes x nodes}, keeping the order of `nodes`.
Adjacency induced_submatrix(const Adjacency& a, std::span<const int> nodes);

// Rows of `x` listed by `nodes`, in order.
Features select_rows(const Features& x, std::span<const int> nodes);

nlohmann::json graph_to_json(const Graph& g);
Graph graph_from_json(const nlohmann::json& j);

Graph load_graph(const std::filesystem::path& path);
// A file holding either one graph object or an array of them.
std::vector<Graph> load_graphs(const std::filesystem::path& path);
void save_graph(const Graph& g, const std::filesystem::path& path);

}  // namespace trap2

#endif  // TRAP2_GRAPH_HPP_
