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

#include "trap2/explanation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace trap2 {
namespace {

// JSON has no infinities; they travel as strings.
nlohmann::json score_to_json(double s) {
  if (std::isinf(s)) return s > 0 ? "inf" : "-inf";
  return s;
}

double score_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw GraphError("bad score '" + s + "'");
  }
  return j.get<double>();
}

}  // namespace

double Explanation::score_of(int v) const {
  const auto it = std::find(domain_nodes.begin(), domain_nodes.end(), v);
  if (it == domain_nodes.end()) {
    throw std::out_of_range("node " + std::to_string(v) +
                            " is not in the explanation domain");
  }
  return node_scores[static_cast<size_t>(it - domain_nodes.begin())];
}

std::vector<int> rank_positions(std::span<const int> nodes,
                                std::span<const double> scores) {
  if (nodes.size() != scores.size()) {
    throw std::invalid_argument("one score per node is required");
  }
  std::vector<int> order(nodes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double sa = scores[static_cast<size_t>(a)];
    const double sb = scores[static_cast<size_t>(b)];
    if (sa != sb) return sa > sb;
    return nodes[static_cast<size_t>(a)] < nodes[static_cast<size_t>(b)];
  });
  return order;
}

Explanation extract(std::span<const int> nodes, const Adjacency& a,
                    std::vector<double> node_scores,
                    Eigen::MatrixXd feature_scores, int n_select) {
  const int n = static_cast<int>(nodes.size());
  if (n_select < 1 || n_select > n) {
    throw std::invalid_argument("n_select must be in [1, " +
                                std::to_string(n) + "], got " +
                                std::to_string(n_select));
  }
  if (a.rows() != n || feature_scores.rows() != n) {
    throw std::invalid_argument("adjacency or feature scores do not match the "
                                "node list");
  }
  Explanation e;
  e.domain_nodes.assign(nodes.begin(), nodes.end());
  e.center = e.domain_nodes.front();
  const auto order = rank_positions(nodes, node_scores);
  std::vector<int> picked(order.begin(), order.begin() + n_select);
  for (int q : picked) e.selected_nodes.push_back(nodes[static_cast<size_t>(q)]);

  std::vector<char> in(static_cast<size_t>(n), 0);
  for (int q : picked) in[static_cast<size_t>(q)] = 1;
  for (int r = 0; r < n; ++r) {
    for (int c = r + 1; c < n; ++c) {
      if (in[static_cast<size_t>(r)] && in[static_cast<size_t>(c)] &&
          a(r, c) != 0) {
        const int u = nodes[static_cast<size_t>(r)];
        const int v = nodes[static_cast<size_t>(c)];
        e.selected_edges.emplace_back(std::min(u, v), std::max(u, v));
      }
    }
  }
  std::sort(e.selected_edges.begin(), e.selected_edges.end());

  const int d = static_cast<int>(feature_scores.cols());
  const int keep = (d + 1) / 2;
  std::vector<int> cols(static_cast<size_t>(d));
  for (int q : picked) {
    std::iota(cols.begin(), cols.end(), 0);
    std::stable_sort(cols.begin(), cols.end(), [&](int x, int y) {
      return feature_scores(q, x) > feature_scores(q, y);
    });
    std::vector<int> chosen(cols.begin(), cols.begin() + keep);
    std::sort(chosen.begin(), chosen.end());
    e.selected_features.push_back(std::move(chosen));
  }
  e.node_scores = std::move(node_scores);
  e.feature_scores = std::move(feature_scores);
  return e;
}

nlohmann::json to_json(const Explanation& e) {
  nlohmann::json node_scores = nlohmann::json::object();
  nlohmann::json feature_scores = nlohmann::json::object();
  for (size_t q = 0; q < e.domain_nodes.size(); ++q) {
    const auto key = std::to_string(e.domain_nodes[q]);
    node_scores[key] = score_to_json(e.node_scores[q]);
    auto row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < e.feature_scores.cols(); ++c) {
      row.push_back(score_to_json(
          e.feature_scores(static_cast<Eigen::Index>(q), c)));
    }
    feature_scores[key] = std::move(row);
  }
  auto edges = nlohmann::json::array();
  for (const auto& [u, v] : e.selected_edges) edges.push_back({u, v});
  return {{"method", e.method},
          {"center", e.center},
          {"target_class", e.target_class},
          {"domain_nodes", e.domain_nodes},
          {"node_scores", std::move(node_scores)},
          {"feature_scores", std::move(feature_scores)},
          {"selected_nodes", e.selected_nodes},
          {"selected_edges", std::move(edges)},
          {"selected_features", e.selected_features},
          {"config", e.config}};
}

Explanation explanation_from_json(const nlohmann::json& j) {
  try {
    Explanation e;
    e.method = j.value("method", std::string());
    e.center = j.at("center").get<int>();
    e.target_class = j.at("target_class").get<int>();
    e.domain_nodes = j.at("domain_nodes").get<std::vector<int>>();
    const auto& ns = j.at("node_scores");
    const auto& fs = j.at("feature_scores");
    const auto n = static_cast<Eigen::Index>(e.domain_nodes.size());
    const auto d =
        n == 0 ? 0
               : static_cast<Eigen::Index>(
                     fs.at(std::to_string(e.domain_nodes[0])).size());
    e.feature_scores.resize(n, d);
    for (Eigen::Index q = 0; q < n; ++q) {
      const auto key = std::to_string(e.domain_nodes[static_cast<size_t>(q)]);
      e.node_scores.push_back(score_from_json(ns.at(key)));
      const auto& row = fs.at(key);
      if (static_cast<Eigen::Index>(row.size()) != d) {
        throw GraphError("ragged feature_scores");
      }
      for (Eigen::Index c = 0; c < d; ++c) {
        e.feature_scores(q, c) = score_from_json(row[static_cast<size_t>(c)]);
      }
    }
    e.selected_nodes = j.at("selected_nodes").get<std::vector<int>>();
    for (const auto& edge : j.at("selected_edges")) {
      e.selected_edges.emplace_back(edge.at(0).get<int>(),
                                    edge.at(1).get<int>());
    }
    e.selected_features = j.value("selected_features",
                                  std::vector<std::vector<int>>{});
    e.config = j.value("config", nlohmann::json::object());
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw GraphError(std::string("malformed explanation: ") + ex.what());
  }
}

void save_explanation(const Explanation& e, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw GraphError("cannot write " + path.string());
  out << to_json(e).dump(2) << '\n';
}

Explanation load_explanation(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot read " + path.string());
  try {
    return explanation_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& ex) {
    throw GraphError(path.string() + ": " + ex.what());
  }
}

std::string to_dot(const Explanation& e, const Adjacency& domain_adjacency) {
  const auto n = static_cast<Eigen::Index>(e.domain_nodes.size());
  if (domain_adjacency.rows() != n) {
    throw std::invalid_argument("adjacency does not match the domain");
  }
  std::ostringstream out;
  out << "graph explanation {\n  node [shape=circle];\n";
  for (Eigen::Index q = 0; q < n; ++q) {
    const int v = e.domain_nodes[static_cast<size_t>(q)];
    const bool sel = std::find(e.selected_nodes.begin(), e.selected_nodes.end(),
                               v) != e.selected_nodes.end();
    out << "  " << v << " [";
    std::string sep;
    if (sel) {
      out << "style=filled, fillcolor=lightblue";
      sep = ", ";
    }
    if (v == e.center) out << sep << "shape=doublecircle, color=red, penwidth=2";
    out << "];\n";
  }
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = r + 1; c < n; ++c) {
      if (domain_adjacency(r, c) == 0) continue;
      int u = e.domain_nodes[static_cast<size_t>(r)];
      int v = e.domain_nodes[static_cast<size_t>(c)];
      if (u > v) std::swap(u, v);
      const bool sel = std::binary_search(e.selected_edges.begin(),
                                          e.selected_edges.end(),
                                          std::make_pair(u, v));
      out << "  " << u << " -- " << v
          << (sel ? " [penwidth=3];\n" : " [color=gray];\n");
    }
  }
  out << "}\n";
  return out.str();
}

std::string to_dot(const Explanation& e, const Graph& g) {
  for (int v : e.domain_nodes) {
    if (v < 0 || v >= g.num_nodes()) {
      throw GraphError("explanation node " + std::to_string(v) +
                       " is not in the graph");
    }
  }
  return to_dot(e, induced_submatrix(g.adjacency, e.domain_nodes));
}

}  // namespace trap2
