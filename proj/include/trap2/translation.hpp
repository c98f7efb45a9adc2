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

#ifndef TRAP2_TRANSLATION_HPP_
#define TRAP2_TRANSLATION_HPP_

#include <vector>

#include "trap2/graph.hpp"

namespace trap2 {

// The k-hop ball around an explained node.
//
// nodes[0] is the center; the remaining nodes follow in ascending original
// index. Surrogate weight slots are laid out in this order.
struct InterpretationDomain {
  int center = 0;
  int hops = 0;
  std::vector<int> nodes;
  std::vector<int> hop_of;
  Adjacency adjacency;
  Features features;

  int size() const { return static_cast<int>(nodes.size()); }
  int feature_dim() const { return static_cast<int>(features.cols()); }
  // Position of original node `v` inside the domain, or -1.
  int position_of(int v) const;
};

InterpretationDomain translate(const Graph& g, int node, int hops);

}  // namespace trap2

#endif  // TRAP2_TRANSLATION_HPP_
