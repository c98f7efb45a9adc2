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

#include "trap2/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "trap2/random.hpp"

namespace trap2 {
namespace {

struct Builder {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> labels;
  std::vector<int> motif_of;

  int add_node(int label, int motif) {
    labels.push_back(label);
    motif_of.push_back(motif);
    return n++;
  }
  void add_edge(int u, int v) { edges.emplace_back(u, v); }
};

int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Preferential attachment: every new node links to `m` distinct existing
// nodes chosen with probability proportional to degree.
std::vector<int> grow_ba(Builder& b, int count, int m, Rng& rng) {
  std::vector<int> nodes;
  std::vector<int> endpoints;  // each node repeated once per incident edge
  const int seed_nodes = std::min(count, m + 1);
  for (int i = 0; i < seed_nodes; ++i) nodes.push_back(b.add_node(0, -1));
  for (int i = 0; i < seed_nodes; ++i) {
    for (int j = i + 1; j < seed_nodes; ++j) {
      b.add_edge(nodes[i], nodes[j]);
      endpoints.push_back(nodes[i]);
      endpoints.push_back(nodes[j]);
    }
  }
  for (int i = seed_nodes; i < count; ++i) {
    const int v = b.add_node(0, -1);
    std::vector<int> targets;
    while (static_cast<int>(targets.size()) < m) {
      const int pick = endpoints[static_cast<size_t>(
          uniform_int(rng, 0, static_cast<int>(endpoints.size()) - 1))];
      if (std::find(targets.begin(), targets.end(), pick) == targets.end()) {
        targets.push_back(pick);
      }
    }
    for (int t : targets) {
      b.add_edge(v, t);
      endpoints.push_back(v);
      endpoints.push_back(t);
    }
    nodes.push_back(v);
  }
  return nodes;
}

std::vector<int> grow_tree(Builder& b, int depth) {
  const int count = (1 << (depth + 1)) - 1;
  std::vector<int> nodes;
  for (int i = 0; i < count; ++i) nodes.push_back(b.add_node(0, -1));
  for (int i = 0; 2 * i + 1 < count; ++i) {
    b.add_edge(nodes[i], nodes[2 * i + 1]);
    b.add_edge(nodes[i], nodes[2 * i + 2]);
  }
  return nodes;
}

// Adds one motif instance and returns the node used to attach it.
int add_house(Builder& b, int motif, int label_offset) {
  // Roles: 1 top, 2 middle, 3 bottom.
  const int b0 = b.add_node(label_offset + 3, motif);
  const int b1 = b.add_node(label_offset + 3, motif);
  const int m0 = b.add_node(label_offset + 2, motif);
  const int m1 = b.add_node(label_offset + 2, motif);
  const int top = b.add_node(label_offset + 1, motif);
  b.add_edge(b0, b1);
  b.add_edge(b0, m0);
  b.add_edge(b1, m1);
  b.add_edge(m0, m1);
  b.add_edge(m0, top);
  b.add_edge(m1, top);
  return b0;
}

int add_cycle(Builder& b, int motif) {
  int first = -1;
  int prev = -1;
  for (int i = 0; i < 6; ++i) {
    const int v = b.add_node(1, motif);
    if (i == 0) first = v;
    if (prev >= 0) b.add_edge(prev, v);
    prev = v;
  }
  b.add_edge(prev, first);
  return first;
}

int add_grid(Builder& b, int motif) {
  int cell[3][3];
  for (auto& row : cell) {
    for (int& v : row) v = b.add_node(1, motif);
  }
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      if (c + 1 < 3) b.add_edge(cell[r][c], cell[r][c + 1]);
      if (r + 1 < 3) b.add_edge(cell[r][c], cell[r + 1][c]);
    }
  }
  return cell[0][0];
}

// Adds `count` edges between distinct, previously unconnected pairs drawn by
// `draw`.
template <typename Draw>
void add_random_edges(Builder& b, Adjacency& a, int count, Rng& rng,
                      Draw&& draw) {
  int added = 0;
  int attempts = 0;
  while (added < count && attempts < 1000 * (count + 1)) {
    ++attempts;
    auto [u, v] = draw(rng);
    if (u == v || a(u, v) != 0) continue;
    a(u, v) = a(v, u) = 1;
    b.add_edge(u, v);
    ++added;
  }
}

Adjacency to_adjacency(const Builder& b) {
  Adjacency a = Adjacency::Zero(b.n, b.n);
  for (auto [u, v] : b.edges) a(u, v) = a(v, u) = 1;
  return a;
}

// Appends one base graph with motifs and noise edges to `b`.
void build_component(Builder& b, const DatasetSpec& spec, int label_offset,
                     int motif_offset, Rng& rng) {
  const bool is_ba = spec.kind == DatasetKind::kBaShapes ||
                     spec.kind == DatasetKind::kBaCommunity;
  const int first = b.n;
  const auto base = is_ba ? grow_ba(b, spec.base_nodes,
                                    spec.ba_edges_per_node, rng)
                          : grow_tree(b, spec.tree_depth);
  for (int m = 0; m < spec.motif_count; ++m) {
    int anchor = 0;
    switch (spec.kind) {
      case DatasetKind::kBaShapes:
      case DatasetKind::kBaCommunity:
        anchor = add_house(b, motif_offset + m, label_offset);
        break;
      case DatasetKind::kTreeCycle:
        anchor = add_cycle(b, motif_offset + m);
        break;
      case DatasetKind::kTreeGrid:
        anchor = add_grid(b, motif_offset + m);
        break;
    }
    const int target =
        base[static_cast<size_t>(uniform_int(rng, 0, static_cast<int>(base.size()) - 1))];
    b.add_edge(anchor, target);
  }
  const int last = b.n;
  const int noise = static_cast<int>(
      std::lround(spec.noise_edge_fraction * static_cast<double>(last - first)));
  Adjacency a = to_adjacency(b);
  add_random_edges(b, a, noise, rng, [&](Rng& r) {
    return std::pair{uniform_int(r, first, last - 1),
                     uniform_int(r, first, last - 1)};
  });
}

}  // namespace

std::string_view to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::kBaShapes:
      return "ba-shapes";
    case DatasetKind::kBaCommunity:
      return "ba-community";
    case DatasetKind::kTreeCycle:
      return "tree-cycle";
    case DatasetKind::kTreeGrid:
      return "tree-grid";
  }
  return "unknown";
}

DatasetKind parse_dataset_kind(std::string_view name) {
  for (auto kind : {DatasetKind::kBaShapes, DatasetKind::kBaCommunity,
                    DatasetKind::kTreeCycle, DatasetKind::kTreeGrid}) {
    if (to_string(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown dataset kind '" + std::string(name) +
                              "'");
}

DatasetSpec DatasetSpec::defaults(DatasetKind kind) {
  DatasetSpec spec;
  spec.kind = kind;
  return spec;
}

void DatasetSpec::validate() const {
  if (base_nodes < 2) throw std::invalid_argument("base_nodes must be >= 2");
  if (tree_depth < 1 || tree_depth > 20) {
    throw std::invalid_argument("tree_depth must be in [1, 20]");
  }
  if (motif_count < 0) throw std::invalid_argument("motif_count must be >= 0");
  if (!(noise_edge_fraction >= 0.0)) {
    throw std::invalid_argument("noise_edge_fraction must be >= 0");
  }
  if (feature_dim < 1) throw std::invalid_argument("feature_dim must be >= 1");
  if (ba_edges_per_node < 1 || ba_edges_per_node >= base_nodes) {
    throw std::invalid_argument("ba_edges_per_node must be in [1, base_nodes)");
  }
}

nlohmann::json to_json(const DatasetSpec& spec) {
  return {{"kind", std::string(to_string(spec.kind))},
          {"seed", spec.seed},
          {"base_nodes", spec.base_nodes},
          {"tree_depth", spec.tree_depth},
          {"motif_count", spec.motif_count},
          {"noise_edge_fraction", spec.noise_edge_fraction},
          {"feature_dim", spec.feature_dim},
          {"ba_edges_per_node", spec.ba_edges_per_node}};
}

DatasetSpec dataset_spec_from_json(const nlohmann::json& j) {
  auto spec = DatasetSpec::defaults(
      parse_dataset_kind(j.value("kind", std::string("ba-shapes"))));
  spec.seed = j.value("seed", spec.seed);
  spec.base_nodes = j.value("base_nodes", spec.base_nodes);
  spec.tree_depth = j.value("tree_depth", spec.tree_depth);
  spec.motif_count = j.value("motif_count", spec.motif_count);
  spec.noise_edge_fraction =
      j.value("noise_edge_fraction", spec.noise_edge_fraction);
  spec.feature_dim = j.value("feature_dim", spec.feature_dim);
  spec.ba_edges_per_node = j.value("ba_edges_per_node", spec.ba_edges_per_node);
  return spec;
}

int motif_size(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::kBaShapes:
    case DatasetKind::kBaCommunity:
      return 5;
    case DatasetKind::kTreeCycle:
      return 6;
    case DatasetKind::kTreeGrid:
      return 9;
  }
  return 0;
}

int num_classes(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::kBaShapes:
      return 4;
    case DatasetKind::kBaCommunity:
      return 8;
    case DatasetKind::kTreeCycle:
    case DatasetKind::kTreeGrid:
      return 2;
  }
  return 0;
}

Graph generate(const DatasetSpec& spec) {
  spec.validate();
  Rng rng = make_stream(spec.seed, 0);
  Builder b;
  build_component(b, spec, 0, 0, rng);
  int community_size = b.n;
  if (spec.kind == DatasetKind::kBaCommunity) {
    build_component(b, spec, 4, spec.motif_count, rng);
    Adjacency a = to_adjacency(b);
    const int bridges = static_cast<int>(std::lround(
        spec.noise_edge_fraction * static_cast<double>(community_size)));
    const int total = b.n;
    add_random_edges(b, a, bridges, rng, [&](Rng& r) {
      return std::pair{uniform_int(r, 0, community_size - 1),
                       uniform_int(r, community_size, total - 1)};
    });
  }

  Features x;
  if (spec.kind == DatasetKind::kBaCommunity) {
    x.resize(b.n, spec.feature_dim);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int i = 0; i < b.n; ++i) {
      const double mean = i < community_size ? 1.0 : -1.0;
      for (int c = 0; c < spec.feature_dim; ++c) x(i, c) = mean + normal(rng);
    }
  } else {
    x = Features::Ones(b.n, spec.feature_dim);
  }

  Graph g = Graph::from_edges(b.n, b.edges, std::move(x));
  g.node_labels = std::move(b.labels);
  g.motif_of = std::move(b.motif_of);
  g.validate();
  return g;
}

std::vector<int> ground_truth_motif(const Graph& g, int i) {
  if (!g.motif_of) throw GraphError("graph has no motif ground truth");
  if (i < 0 || i >= g.num_nodes()) throw GraphError("node index out of range");
  const int id = (*g.motif_of)[static_cast<size_t>(i)];
  if (id < 0) {
    throw GraphError("node " + std::to_string(i) +
                     " belongs to the base graph and has no ground truth");
  }
  std::vector<int> out;
  for (int j = 0; j < g.num_nodes(); ++j) {
    if ((*g.motif_of)[static_cast<size_t>(j)] == id) out.push_back(j);
  }
  return out;
}

std::vector<int> motif_nodes(const Graph& g) {
  std::vector<int> out;
  if (!g.motif_of) return out;
  for (int j = 0; j < g.num_nodes(); ++j) {
    if ((*g.motif_of)[static_cast<size_t>(j)] >= 0) out.push_back(j);
  }
  return out;
}

}  // namespace trap2
