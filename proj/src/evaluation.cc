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

#include "trap2/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "trap2/parallel.hpp"
#include "trap2/random.hpp"
#include "trap2/synthetic.hpp"

namespace trap2 {
namespace {

const char* const kMetrics[] = {"accuracy", "fidelity", "contrast_ratio",
                                "contrast_diff"};

MetricSummary summarize(const std::string& method, const std::string& metric,
                        const std::vector<double>& values) {
  MetricSummary s;
  s.method = method;
  s.metric = metric;
  s.n_nodes = static_cast<int>(values.size());
  if (values.empty()) {
    s.mean = std::numeric_limits<double>::quiet_NaN();
    s.std = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(sq / static_cast<double>(values.size()));
  return s;
}

std::vector<int> pick_nodes(const Graph& g, int sample, std::uint64_t seed) {
  std::vector<int> nodes = motif_nodes(g);
  if (nodes.empty()) {
    throw GraphError("graph has no motif ground truth to evaluate against");
  }
  if (sample > 0 && sample < static_cast<int>(nodes.size())) {
    Rng rng = make_stream(seed, 0x65766c);
    for (int i = 0; i < sample; ++i) {
      std::uniform_int_distribution<int> pick(
          i, static_cast<int>(nodes.size()) - 1);
      std::swap(nodes[static_cast<size_t>(i)],
                nodes[static_cast<size_t>(pick(rng))]);
    }
    nodes.resize(static_cast<size_t>(sample));
    std::sort(nodes.begin(), nodes.end());
  }
  return nodes;
}

}  // namespace

double accuracy(const Explanation& e, std::span<const int> truth) {
  // A domain smaller than the motif can only offer fewer nodes; the
  // denominator stays |truth|.
  if (truth.empty() || e.selected_nodes.empty() ||
      e.selected_nodes.size() > truth.size()) {
    throw std::invalid_argument("accuracy needs 1..|truth| selected nodes");
  }
  int hits = 0;
  for (int v : e.selected_nodes) {
    if (std::find(truth.begin(), truth.end(), v) != truth.end()) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

double fidelity(const Graph& g, int node, const Explanation& e,
                const Predictor& predictor, int hops) {
  const auto dom = translate(g, node, hops);
  const Eigen::RowVectorXd full =
      predictor.response(dom.adjacency, dom.features, 0);
  const int c = argmax(full);
  Adjacency a = dom.adjacency;
  Features x = dom.features;
  for (int q = 0; q < dom.size(); ++q) {
    const int v = dom.nodes[static_cast<size_t>(q)];
    const bool keep = v == node ||
                      std::find(e.selected_nodes.begin(),
                                e.selected_nodes.end(),
                                v) != e.selected_nodes.end();
    if (keep) continue;
    a.row(q).setZero();
    a.col(q).setZero();
    x.row(q).setZero();
  }
  return std::abs(full[c] - predictor.response(a, x, 0)[c]);
}

Contrast contrastivity(std::span<const double> scores, int top_n) {
  const int n = static_cast<int>(scores.size());
  if (top_n < 1 || top_n >= n) {
    throw std::invalid_argument("contrastivity needs 1 <= top_n < " +
                                std::to_string(n));
  }
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const double s_min = sorted[static_cast<size_t>(top_n - 1)];
  double out = 0.0;
  for (int q = top_n; q < n; ++q) out += sorted[static_cast<size_t>(q)];
  out /= static_cast<double>(n - top_n);
  Contrast c;
  c.diff = s_min - out;
  c.ratio = out == 0.0 ? std::numeric_limits<double>::infinity() : s_min / out;
  return c;
}

nlohmann::json to_json(const EvalConfig& cfg) {
  return {{"dataset", cfg.dataset},
          {"methods", cfg.methods},
          {"explain", to_json(cfg.explain)},
          {"greedy_remove_node", cfg.greedy.remove_node},
          {"grad_use_adjacency", cfg.grad.use_adjacency},
          {"sample", cfg.sample},
          {"seed", cfg.seed}};
}

const MetricSummary& EvalReport::find(const std::string& method,
                                      const std::string& metric) const {
  for (const auto& s : summary) {
    if (s.method == method && s.metric == metric) return s;
  }
  throw std::out_of_range("no " + metric + " row for " + method);
}

std::string EvalReport::csv() const {
  std::ostringstream out;
  out << "dataset,method,metric,mean,std,n_nodes,seed\n";
  out << std::setprecision(17);
  for (const auto& s : summary) {
    out << dataset << ',' << s.method << ',' << s.metric << ',' << s.mean
        << ',' << s.std << ',' << s.n_nodes << ',' << seed << '\n';
  }
  return out.str();
}

nlohmann::json EvalReport::to_json() const {
  auto rows = nlohmann::json::array();
  for (const auto& s : summary) {
    rows.push_back({{"dataset", dataset},
                    {"method", s.method},
                    {"metric", s.metric},
                    {"mean", s.mean},
                    {"std", s.std},
                    {"n_nodes", s.n_nodes},
                    {"seed", seed}});
  }
  return {{"rows", std::move(rows)}, {"nodes", nodes}, {"config", config}};
}

Explanation explain_with(const std::string& method, const Graph& g, int node,
                         const Predictor& predictor, const EvalConfig& cfg,
                         int n_select) {
  const std::uint64_t seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(node));
  const int hops = cfg.explain.perturbation.hops;
  const auto dom = translate(g, node, hops);
  const int k = std::min(n_select, dom.size());
  if (method == "trap2") {
    ExplainConfig ecfg = cfg.explain;
    ecfg.perturbation.seed = seed;
    ecfg.n_select = k;
    ecfg.workers = 1;
    return explain_node(g, node, predictor, ecfg);
  }
  switch (parse_baseline_kind(method)) {
    case BaselineKind::kRandom:
      return random_explainer(dom, seed, k);
    case BaselineKind::kGreedy:
      return greedy_explainer(dom, predictor, k, cfg.greedy);
    case BaselineKind::kGrad: {
      const int target =
          argmax(predictor.response(dom.adjacency, dom.features, 0));
      return grad_explainer(dom, predictor, target, k, cfg.grad);
    }
  }
  throw std::invalid_argument("unknown method '" + method + "'");
}

EvalReport evaluate(const Graph& g, const Predictor& predictor,
                    const EvalConfig& cfg) {
  EvalReport report;
  report.dataset = cfg.dataset;
  report.seed = cfg.seed;
  report.config = to_json(cfg);
  if (cfg.methods.empty()) return report;
  for (const auto& m : cfg.methods) {
    if (m != "trap2") parse_baseline_kind(m);
  }
  if (predictor.task() != Task::kNode) {
    throw std::invalid_argument("evaluation needs a node-task predictor");
  }
  report.nodes = pick_nodes(g, cfg.sample, cfg.seed);
  const int n_nodes = static_cast<int>(report.nodes.size());
  const int n_methods = static_cast<int>(cfg.methods.size());
  report.results.resize(static_cast<size_t>(n_nodes * n_methods));
  const int hops = cfg.explain.perturbation.hops;

  parallel_for(n_nodes, cfg.workers, [&](int i) {
    const int node = report.nodes[static_cast<size_t>(i)];
    const auto truth = ground_truth_motif(g, node);
    const int truth_size = static_cast<int>(truth.size());
    for (int k = 0; k < n_methods; ++k) {
      const auto& method = cfg.methods[static_cast<size_t>(k)];
      const Explanation e =
          explain_with(method, g, node, predictor, cfg, truth_size);
      NodeResult r;
      r.node = node;
      r.method = method;
      r.accuracy = accuracy(e, truth);
      r.fidelity = fidelity(g, node, e, predictor, hops);
      if (static_cast<int>(e.node_scores.size()) > truth_size) {
        r.has_contrast = true;
        r.contrast = contrastivity(e.node_scores, truth_size);
      }
      report.results[static_cast<size_t>(i * n_methods + k)] = r;
    }
  });

  for (int k = 0; k < n_methods; ++k) {
    const auto& method = cfg.methods[static_cast<size_t>(k)];
    std::vector<double> acc, fid, ratio, diff;
    for (int i = 0; i < n_nodes; ++i) {
      const auto& r = report.results[static_cast<size_t>(i * n_methods + k)];
      acc.push_back(r.accuracy);
      fid.push_back(r.fidelity);
      if (!r.has_contrast) continue;
      // Infinite ratios (nothing outside scores above 0) are left out of
      // the mean; n_nodes shows how many were kept.
      if (std::isfinite(r.contrast.ratio)) ratio.push_back(r.contrast.ratio);
      if (std::isfinite(r.contrast.diff)) diff.push_back(r.contrast.diff);
    }
    report.summary.push_back(summarize(method, kMetrics[0], acc));
    report.summary.push_back(summarize(method, kMetrics[1], fid));
    report.summary.push_back(summarize(method, kMetrics[2], ratio));
    report.summary.push_back(summarize(method, kMetrics[3], diff));
  }
  return report;
}

void write_report(const EvalReport& report, const std::filesystem::path& csv,
                  const std::filesystem::path& json) {
  if (!csv.empty()) {
    std::ofstream out(csv);
    if (!out) throw std::runtime_error("cannot write " + csv.string());
    out << report.csv();
  }
  if (!json.empty()) {
    std::ofstream out(json);
    if (!out) throw std::runtime_error("cannot write " + json.string());
    out << report.to_json().dump(2) << '\n';
  }
}

}  // namespace trap2
