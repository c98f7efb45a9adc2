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

#ifndef TRAP2_EVALUATION_HPP_
#define TRAP2_EVALUATION_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "trap2/baselines.hpp"
#include "trap2/explanation.hpp"
#include "trap2/graph.hpp"
#include "trap2/paraphrase.hpp"
#include "trap2/predictor.hpp"

namespace trap2 {

// |V^ & truth| / |truth|. V^ may be smaller than truth only when the
// domain itself is.
double accuracy(const Explanation& e, std::span<const int> truth);

// |f_c(domain) - f_c(masked domain)| at the class c predicted on the full
// domain. The masked domain keeps V^ and the center; every other node loses
// its features and edges.
double fidelity(const Graph& g, int node, const Explanation& e,
                const Predictor& predictor, int hops);

struct Contrast {
  double ratio = 0.0;  // +inf when the outside mean is 0
  double diff = 0.0;
};

// Lowest score among the top `top_n` against the mean of the rest.
Contrast contrastivity(std::span<const double> scores, int top_n);

inline const std::vector<std::string>& all_methods() {
  static const std::vector<std::string> kMethods = {"trap2", "random",
                                                    "greedy", "grad"};
  return kMethods;
}

struct EvalConfig {
  std::string dataset = "graph";
  std::vector<std::string> methods = all_methods();
  ExplainConfig explain;
  GreedyOptions greedy;
  GradOptions grad;
  // Evaluate a seeded subset of this many motif nodes; 0 means all.
  int sample = 0;
  std::uint64_t seed = 0;
  int workers = 1;
};

nlohmann::json to_json(const EvalConfig& cfg);

struct NodeResult {
  int node = 0;
  std::string method;
  double accuracy = 0.0;
  double fidelity = 0.0;
  // Absent when the domain is no larger than the motif.
  bool has_contrast = false;
  Contrast contrast;
};

struct MetricSummary {
  std::string method;
  std::string metric;
  double mean = 0.0;
  double std = 0.0;  // population
  int n_nodes = 0;
};

struct EvalReport {
  std::string dataset;
  std::uint64_t seed = 0;
  std::vector<int> nodes;
  std::vector<NodeResult> results;
  std::vector<MetricSummary> summary;
  nlohmann::json config = nlohmann::json::object();

  // Throws std::out_of_range for unknown pairs.
  const MetricSummary& find(const std::string& method,
                            const std::string& metric) const;
  std::string csv() const;
  nlohmann::json to_json() const;
};

// The explanation `method` gives for `node`, keeping min(n_select, n_hat)
// nodes.
Explanation explain_with(const std::string& method, const Graph& g, int node,
                         const Predictor& predictor, const EvalConfig& cfg,
                         int n_select);

EvalReport evaluate(const Graph& g, const Predictor& predictor,
                    const EvalConfig& cfg);

void write_report(const EvalReport& report, const std::filesystem::path& csv,
                  const std::filesystem::path& json);

}  // namespace trap2

#endif  // TRAP2_EVALUATION_HPP_
