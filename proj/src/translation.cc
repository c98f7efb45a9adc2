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

#include "trap2/translation.hpp"

#include <algorithm>

namespace trap2 {

int InterpretationDomain::position_of(int v) const {
  const auto it = std::find(nodes.begin(), nodes.end(), v);
  return it == nodes.end() ? -1 : static_cast<int>(it - nodes.begin());
}

InterpretationDomain translate(const Graph& g, int node, int hops) {
  if (node < 0 || node >= g.num_nodes()) {
    throw GraphError("node index " + std::to_string(node) + " out of range");
  }
  if (hops < 1) throw GraphError("hop bound must be >= 1");
  const auto dist = hop_distances(g.adjacency, node, hops);

  InterpretationDomain dom;
  dom.center = node;
  dom.hops = hops;
  dom.nodes.push_back(node);
  for (int j = 0; j < g.num_nodes(); ++j) {
    if (j != node && dist[static_cast<size_t>(j)] >= 0) dom.nodes.push_back(j);
  }
  for (int v : dom.nodes) dom.hop_of.push_back(dist[static_cast<size_t>(v)]);
  dom.adjacency = induced_submatrix(g.adjacency, dom.nodes);
  dom.features = select_rows(g.features, dom.nodes);
  return dom;
}

}  // namespace trap2
