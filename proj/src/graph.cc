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

#include "trap2/graph.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace trap2 {
namespace {

std::vector<std::vector<int>> neighbor_lists(const Adjacency& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<std::vector<int>> out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (a(i, j) != 0) out[i].push_back(j);
    }
  }
  return out;
}

// Layered frontier expansion over precomputed neighbor lists.
void expand(const std::vector<std::vector<int>>& nbrs, int source, int k,
            std::vector<int>& dist) {
  std::fill(dist.begin(), dist.end(), -1);
  dist[source] = 0;
  std::vector<int> frontier{source};
  std::vector<int> next;
  for (int hop = 1; hop <= k && !frontier.empty(); ++hop) {
    next.clear();
    for (int u : frontier) {
      for (int v : nbrs[u]) {
        if (dist[v] < 0) {
          dist[v] = hop;
          next.push_back(v);
        }
      }
    }
    frontier.swap(next);
  }
}

}  // namespace

void check_binary(const Adjacency& a) {
  if (a.rows() != a.cols()) throw GraphError("adjacency matrix is not square");
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (a(i, j) > 1) throw GraphError("adjacency matrix is not binary");
    }
  }
}

void Graph::validate() const {
  check_binary(adjacency);
  const int n = num_nodes();
  for (int i = 0; i < n; ++i) {
    if (adjacency(i, i) != 0) {
      throw GraphError("self-loop at node " + std::to_string(i));
    }
    if (!directed) {
      for (int j = i + 1; j < n; ++j) {
        if (adjacency(i, j) != adjacency(j, i)) {
          throw GraphError("undirected graph has asymmetric entry (" +
                           std::to_string(i) + ", " + std::to_string(j) + ")");
        }
      }
    }
  }
  if (features.rows() != n) {
    throw GraphError("feature matrix has " + std::to_string(features.rows()) +
                     " rows for " + std::to_string(n) + " nodes");
  }
  if (features.cols() < 1) throw GraphError("feature dimension must be >= 1");
  if (node_labels && static_cast<int>(node_labels->size()) != n) {
    throw GraphError("node_labels length does not match node count");
  }
  if (motif_of && static_cast<int>(motif_of->size()) != n) {
    throw GraphError("motif_of length does not match node count");
  }
}

Graph Graph::from_edges(int n, std::span<const std::pair<int, int>> edges,
                        Features features, bool directed) {
  if (n < 0) throw GraphError("negative node count");
  Graph g;
  g.adjacency = Adjacency::Zero(n, n);
  g.directed = directed;
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw GraphError("edge endpoint out of range");
    }
    if (u == v) throw GraphError("self-loop edge");
    g.adjacency(u, v) = 1;
    if (!directed) g.adjacency(v, u) = 1;
  }
  g.features = std::move(features);
  return g;
}

bool operator==(const Graph& a, const Graph& b) {
  return a.directed == b.directed && a.adjacency == b.adjacency &&
         a.features.rows() == b.features.rows() &&
         a.features.cols() == b.features.cols() && a.features == b.features &&
         a.node_labels == b.node_labels && a.graph_label == b.graph_label &&
         a.motif_of == b.motif_of;
}

int edge_count(const Adjacency& a) {
  int total = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) total += a(i, j);
  }
  // Symmetric matrices count every edge twice.
  return a == a.transpose() ? total / 2 : total;
}

std::vector<int> hop_distances(const Adjacency& a, int source, int max_hops) {
  const int n = static_cast<int>(a.rows());
  if (source < 0 || source >= n) {
    throw GraphError("node index " + std::to_string(source) + " out of range");
  }
  std::vector<int> dist(n, -1);
  dist[source] = 0;
  std::vector<int> frontier{source};
  std::vector<int> next;
  for (int hop = 1; hop <= max_hops && !frontier.empty(); ++hop) {
    next.clear();
    for (int u : frontier) {
      for (int v = 0; v < n; ++v) {
        if (a(u, v) != 0 && dist[v] < 0) {
          dist[v] = hop;
          next.push_back(v);
        }
      }
    }
    frontier.swap(next);
  }
  return dist;
}

std::vector<std::uint8_t> reachable_within(const Adjacency& a, int source,
                                           int k) {
  if (k < 0) throw GraphError("hop bound must be non-negative");
  const auto dist = hop_distances(a, source, k);
  std::vector<std::uint8_t> mask(dist.size());
  for (size_t j = 0; j < dist.size(); ++j) mask[j] = dist[j] >= 0 ? 1 : 0;
  return mask;
}

Adjacency reachability(const Adjacency& a, int k) {
  if (k < 1) throw GraphError("hop bound must be >= 1");
  check_binary(a);
  const int n = static_cast<int>(a.rows());
  const auto nbrs = neighbor_lists(a);
  Adjacency out = Adjacency::Zero(n, n);
  std::vector<int> dist(n);
  for (int i = 0; i < n; ++i) {
    expand(nbrs, i, k, dist);
    for (int j = 0; j < n; ++j) out(i, j) = dist[j] >= 0 ? 1 : 0;
  }
  return out;
}

Adjacency induced_submatrix(const Adjacency& a, std::span<const int> nodes) {
  const int n = static_cast<int>(a.rows());
  std::set<int> seen;
  for (int v : nodes) {
    if (v < 0 || v >= n) {
      throw GraphError("node index " + std::to_string(v) + " out of range");
    }
    if (!seen.insert(v).second) {
      throw GraphError("duplicate node index " + std::to_string(v));
    }
  }
  const int m = static_cast<int>(nodes.size());
  Adjacency out(m, m);
  for (int p = 0; p < m; ++p) {
    for (int q = 0; q < m; ++q) out(p, q) = a(nodes[p], nodes[q]);
  }
  return out;
}

Features select_rows(const Features& x, std::span<const int> nodes) {
  Features out(static_cast<Eigen::Index>(nodes.size()), x.cols());
  for (size_t p = 0; p < nodes.size(); ++p) {
    if (nodes[p] < 0 || nodes[p] >= x.rows()) {
      throw GraphError("row index out of range");
    }
    out.row(static_cast<Eigen::Index>(p)) = x.row(nodes[p]);
  }
  return out;
}

nlohmann::json graph_to_json(const Graph& g) {
  nlohmann::json j;
  const int n = g.num_nodes();
  j["n"] = n;
  j["directed"] = g.directed;
  auto edges = nlohmann::json::array();
  for (int u = 0; u < n; ++u) {
    for (int v = g.directed ? 0 : u + 1; v < n; ++v) {
      if (g.adjacency(u, v) != 0) edges.push_back({u, v});
    }
  }
  j["edges"] = std::move(edges);
  auto features = nlohmann::json::array();
  for (int i = 0; i < n; ++i) {
    std::vector<double> row(g.features.row(i).begin(), g.features.row(i).end());
    features.push_back(std::move(row));
  }
  j["features"] = std::move(features);
  j["node_labels"] = g.node_labels ? nlohmann::json(*g.node_labels) : nullptr;
  j["graph_label"] = g.graph_label ? nlohmann::json(*g.graph_label) : nullptr;
  j["motif_of"] = g.motif_of ? nlohmann::json(*g.motif_of) : nullptr;
  return j;
}

Graph graph_from_json(const nlohmann::json& j) {
  try {
    const int n = j.at("n").get<int>();
    if (n < 0) throw GraphError("negative node count");
    const bool directed = j.value("directed", false);
    Graph g;
    g.directed = directed;
    g.adjacency = Adjacency::Zero(n, n);
    if (j.contains("adjacency")) {
      // Dense form, taken verbatim; symmetry is checked by validate().
      const auto& rows = j["adjacency"];
      if (!rows.is_array() || static_cast<int>(rows.size()) != n) {
        throw GraphError("adjacency must have n rows");
      }
      for (int u = 0; u < n; ++u) {
        if (static_cast<int>(rows[u].size()) != n) {
          throw GraphError("adjacency must have n columns");
        }
        for (int v = 0; v < n; ++v) {
          const int value = rows[u][v].get<int>();
          if (value != 0 && value != 1) {
            throw GraphError("adjacency matrix is not binary");
          }
          g.adjacency(u, v) = static_cast<std::uint8_t>(value);
        }
      }
    } else {
      for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2) {
          throw GraphError("edge entries must be [u, v] pairs");
        }
        const int u = e[0].get<int>();
        const int v = e[1].get<int>();
        if (u < 0 || v < 0 || u >= n || v >= n) {
          throw GraphError("edge endpoint out of range");
        }
        if (u == v) throw GraphError("self-loop edge");
        g.adjacency(u, v) = 1;
        if (!directed) g.adjacency(v, u) = 1;
      }
    }
    const auto& rows = j.at("features");
    if (!rows.is_array()) throw GraphError("features must be an array");
    if (static_cast<int>(rows.size()) != n) {
      throw GraphError("feature matrix has " + std::to_string(rows.size()) +
                       " rows for " + std::to_string(n) + " nodes");
    }
    const size_t d = n > 0 ? rows[0].size() : 1;
    g.features = Features::Zero(n, static_cast<Eigen::Index>(d));
    for (int i = 0; i < n; ++i) {
      if (rows[i].size() != d) throw GraphError("ragged feature rows");
      for (size_t c = 0; c < d; ++c) {
        g.features(i, static_cast<Eigen::Index>(c)) = rows[i][c].get<double>();
      }
    }
    if (j.contains("node_labels") && !j["node_labels"].is_null()) {
      g.node_labels = j["node_labels"].get<std::vector<int>>();
    }
    if (j.contains("graph_label") && !j["graph_label"].is_null()) {
      g.graph_label = j["graph_label"].get<int>();
    }
    if (j.contains("motif_of") && !j["motif_of"].is_null()) {
      g.motif_of = j["motif_of"].get<std::vector<int>>();
    }
    g.validate();
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw GraphError(std::string("malformed graph JSON: ") + e.what());
  }
}

namespace {

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw GraphError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

}  // namespace

Graph load_graph(const std::filesystem::path& path) {
  return graph_from_json(read_json(path));
}

std::vector<Graph> load_graphs(const std::filesystem::path& path) {
  const auto j = read_json(path);
  std::vector<Graph> out;
  if (j.is_array()) {
    for (const auto& item : j) out.push_back(graph_from_json(item));
  } else {
    out.push_back(graph_from_json(j));
  }
  return out;
}

void save_graph(const Graph& g, const std::filesystem::path& path) {
  g.validate();
  std::ofstream out(path);
  if (!out) throw GraphError("cannot write " + path.string());
  out << graph_to_json(g).dump() << '\n';
}

}  // namespace trap2
