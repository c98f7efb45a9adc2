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

#include "trap2/paraphrase.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "trap2/parallel.hpp"
#include "trap2/random.hpp"

namespace trap2 {
namespace {

void softmax_rows(Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    row.array() -= row.maxCoeff();
    row = row.array().exp();
    row /= row.sum();
  }
}

Eigen::VectorXd sample_weights(std::span<const double> gammas, WeightMode mode) {
  Eigen::VectorXd w(static_cast<Eigen::Index>(gammas.size()));
  for (size_t j = 0; j < gammas.size(); ++j) {
    const double g = gammas[j];
    if (!(g > 0.0) || !std::isfinite(g)) {
      throw std::invalid_argument("energy levels must be finite and > 0");
    }
    w[static_cast<Eigen::Index>(j)] = mode == WeightMode::kInverse ? 1.0 / g : g;
  }
  return w;
}

// Loss at `w`; leaves the softmax outputs in `probs`. Inputs are held in
// single precision: the two products against them dominate the fit, and
// zeros stay exact, so never-gated slots still get zero gradient.
double evaluate(const Eigen::MatrixXd& w, const Eigen::MatrixXf& inputs,
                const Eigen::MatrixXd& responses, const Eigen::VectorXd& sw,
                double l1, Eigen::MatrixXd& probs) {
  // One matrix-vector product per class beats a skinny GEMM here.
  probs.resize(inputs.rows(), w.rows());
  for (Eigen::Index c = 0; c < w.rows(); ++c) {
    const Eigen::VectorXf wc = w.row(c).transpose().cast<float>();
    probs.col(c) = (inputs * wc).cast<double>();
  }
  softmax_rows(probs);
  const Eigen::VectorXd sq = (probs - responses).rowwise().squaredNorm();
  return sw.dot(sq) + l1 * w.cwiseAbs().sum();
}

void check_batch(const Eigen::MatrixXd& inputs,
                 const Eigen::MatrixXd& responses,
                 std::span<const double> gammas) {
  if (inputs.rows() == 0) throw std::invalid_argument("empty batch");
  if (responses.rows() != inputs.rows() ||
      static_cast<Eigen::Index>(gammas.size()) != inputs.rows()) {
    throw std::invalid_argument("batch inputs, responses and energies differ "
                                "in length");
  }
}

struct Batch {
  Eigen::MatrixXd inputs;
  Eigen::MatrixXd responses;
  std::vector<double> gammas;
};

// Draws the perturbations around dom's center and records the surrogate
// input, the model response and the energy of each one.
Batch collect(const InterpretationDomain& dom, const Predictor& predictor,
              const PerturbationConfig& cfg, int workers) {
  cfg.validate();
  if (predictor.feature_dim() != dom.feature_dim()) {
    throw std::invalid_argument("predictor expects " +
                                std::to_string(predictor.feature_dim()) +
                                " features, graph has " +
                                std::to_string(dom.feature_dim()));
  }
  const Eigen::Index slots =
      static_cast<Eigen::Index>(dom.size()) * dom.feature_dim();
  Batch b;
  b.inputs.resize(cfg.samples, slots);
  b.responses.resize(cfg.samples, predictor.num_classes());
  b.gammas.assign(static_cast<size_t>(cfg.samples), 0.0);
  parallel_for(cfg.samples, workers, [&](int j) {
    const PerturbedInstance inst = draw_instance(dom, cfg, j);
    b.responses.row(j) = predictor.response(inst.adjacency, inst.features, 0);
    b.inputs.row(j) =
        surrogate_input(inst.adjacency, inst.features, cfg.hops).transpose();
    b.gammas[static_cast<size_t>(j)] = inst.gamma;
  });
  return b;
}

}  // namespace

Eigen::VectorXd surrogate_input(const Adjacency& a_p, const Features& x_p,
                                int hops, int center) {
  if (a_p.rows() != x_p.rows() || a_p.rows() != a_p.cols()) {
    throw std::invalid_argument("adjacency and features disagree on node "
                                "count");
  }
  const auto gate = reachable_within(a_p, center, hops);
  const Eigen::Index d = x_p.cols();
  Eigen::VectorXd z = Eigen::VectorXd::Zero(x_p.rows() * d);
  for (Eigen::Index q = 0; q < x_p.rows(); ++q) {
    if (gate[static_cast<size_t>(q)]) z.segment(q * d, d) = x_p.row(q).transpose();
  }
  return z;
}

Eigen::RowVectorXd surrogate_forward(const SurrogateModel& model,
                                     const Adjacency& a_p,
                                     const Features& x_p) {
  if (a_p.rows() != model.n_hat || x_p.cols() != model.feature_dim) {
    throw std::invalid_argument("instance does not match the surrogate's "
                                "domain");
  }
  Eigen::MatrixXd logits =
      (model.weights * surrogate_input(a_p, x_p, model.hops)).transpose();
  softmax_rows(logits);
  return logits.row(0);
}

std::string_view to_string(WeightMode mode) {
  return mode == WeightMode::kInverse ? "inverse" : "proportional";
}

WeightMode parse_weight_mode(std::string_view name) {
  if (name == "inverse") return WeightMode::kInverse;
  if (name == "proportional") return WeightMode::kProportional;
  throw std::invalid_argument("unknown weight mode '" + std::string(name) +
                              "'");
}

void FitConfig::validate() const {
  if (!(l1 >= 0.0)) throw std::invalid_argument("l1 must be >= 0");
  if (epochs < 0) throw std::invalid_argument("epochs must be >= 0");
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("learning rate must be > 0");
  }
  if (!(lr_growth >= 1.0)) throw std::invalid_argument("lr growth must be >= 1");
}

nlohmann::json to_json(const FitConfig& cfg) {
  return {{"l1", cfg.l1},
          {"epochs", cfg.epochs},
          {"lr", cfg.learning_rate},
          {"lr_growth", cfg.lr_growth},
          {"weight_mode", std::string(to_string(cfg.weight_mode))}};
}

FitConfig fit_config_from_json(const nlohmann::json& j) {
  FitConfig cfg;
  cfg.l1 = j.value("l1", cfg.l1);
  cfg.epochs = j.value("epochs", cfg.epochs);
  cfg.learning_rate = j.value("lr", cfg.learning_rate);
  cfg.lr_growth = j.value("lr_growth", cfg.lr_growth);
  if (j.contains("weight_mode")) {
    cfg.weight_mode = parse_weight_mode(j.at("weight_mode").get<std::string>());
  }
  return cfg;
}

double surrogate_loss(const Eigen::MatrixXd& w, const Eigen::MatrixXd& inputs,
                      const Eigen::MatrixXd& responses,
                      std::span<const double> gammas, const FitConfig& cfg) {
  check_batch(inputs, responses, gammas);
  Eigen::MatrixXd probs;
  return evaluate(w, inputs.cast<float>(), responses,
                  sample_weights(gammas, cfg.weight_mode),
                  cfg.l1, probs);
}

Eigen::MatrixXd fit_weights(const Eigen::MatrixXd& inputs,
                            const Eigen::MatrixXd& responses,
                            std::span<const double> gammas,
                            const FitConfig& cfg, std::vector<double>* trace) {
  cfg.validate();
  check_batch(inputs, responses, gammas);
  const Eigen::VectorXd sw = sample_weights(gammas, cfg.weight_mode);
  const Eigen::MatrixXf zf = inputs.cast<float>();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(responses.cols(), inputs.cols());
  Eigen::MatrixXd probs;
  Eigen::MatrixXd trial_probs;
  double loss = evaluate(w, zf, responses, sw, cfg.l1, probs);
  double lr = cfg.learning_rate;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    // d loss / d g = 2 sw (g - f); back through the softmax row by row.
    const Eigen::MatrixXd r =
        (2.0 * sw).asDiagonal() * (probs - responses);
    const Eigen::VectorXd inner = (probs.array() * r.array()).rowwise().sum();
    const Eigen::MatrixXd dlogits =
        probs.array() * (r.colwise() - inner).array();
    const Eigen::MatrixXf dlogits_f = dlogits.cast<float>();
    Eigen::MatrixXd grad = (dlogits_f.transpose() * zf).cast<double>();
    grad += cfg.l1 * w.unaryExpr([](double v) {
      return static_cast<double>((v > 0.0) - (v < 0.0));
    });
    const Eigen::MatrixXd trial = w - lr * grad;
    const double trial_loss =
        evaluate(trial, zf, responses, sw, cfg.l1, trial_probs);
    if (trial_loss <= loss) {
      w = trial;
      loss = trial_loss;
      probs.swap(trial_probs);
      lr *= cfg.lr_growth;
    } else {
      lr *= 0.5;
    }
    if (trace) trace->push_back(loss);
  }
  return w;
}

SurrogateModel fit(std::span<const PerturbedInstance> batch, int hops,
                   const FitConfig& cfg, std::vector<double>* trace) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  const auto& first = batch.front();
  SurrogateModel model;
  model.hops = hops;
  model.n_hat = static_cast<int>(first.adjacency.rows());
  model.feature_dim = static_cast<int>(first.features.cols());
  const auto m = static_cast<Eigen::Index>(batch.size());
  Eigen::MatrixXd inputs(m, static_cast<Eigen::Index>(model.n_hat) *
                                model.feature_dim);
  Eigen::MatrixXd responses(m, first.response.size());
  std::vector<double> gammas;
  for (Eigen::Index j = 0; j < m; ++j) {
    const auto& inst = batch[static_cast<size_t>(j)];
    if (inst.adjacency.rows() != model.n_hat ||
        inst.features.cols() != model.feature_dim ||
        inst.response.size() != responses.cols()) {
      throw std::invalid_argument("batch instances differ in shape");
    }
    inputs.row(j) = surrogate_input(inst.adjacency, inst.features, hops).transpose();
    responses.row(j) = inst.response;
    gammas.push_back(inst.gamma);
  }
  model.weights = fit_weights(inputs, responses, gammas, cfg, trace);
  return model;
}

std::vector<double> node_contributions(const SurrogateModel& model,
                                       int target_class) {
  const Eigen::MatrixXd f = feature_contributions(model, target_class);
  std::vector<double> out(static_cast<size_t>(model.n_hat));
  for (int q = 0; q < model.n_hat; ++q) out[static_cast<size_t>(q)] = f.row(q).sum();
  return out;
}

Eigen::MatrixXd feature_contributions(const SurrogateModel& model,
                                      int target_class) {
  if (target_class < 0 || target_class >= model.weights.rows()) {
    throw std::invalid_argument("class " + std::to_string(target_class) +
                                " out of range");
  }
  Eigen::MatrixXd f(model.n_hat, model.feature_dim);
  for (int q = 0; q < model.n_hat; ++q) {
    for (int c = 0; c < model.feature_dim; ++c) {
      f(q, c) = std::abs(model.weights(target_class, q * model.feature_dim + c));
    }
  }
  return f;
}

Explanation extract(const InterpretationDomain& dom,
                    std::vector<double> node_scores,
                    Eigen::MatrixXd feature_scores, int n_select) {
  return extract(dom.nodes, dom.adjacency, std::move(node_scores),
                 std::move(feature_scores), n_select);
}

nlohmann::json to_json(const ExplainConfig& cfg) {
  return {{"perturbation", to_json(cfg.perturbation)},
          {"fit", to_json(cfg.fit)},
          {"n_select", cfg.n_select}};
}

int default_selection(int n_hat) { return (n_hat + 3) / 4; }

Explanation explain_node(const Graph& g, int node, const Predictor& predictor,
                         const ExplainConfig& cfg) {
  if (predictor.task() != Task::kNode) {
    throw std::invalid_argument("explain_node needs a node-task predictor");
  }
  const auto dom = translate(g, node, cfg.perturbation.hops);
  const Batch b = collect(dom, predictor, cfg.perturbation, cfg.workers);
  const int target =
      argmax(predictor.response(dom.adjacency, dom.features, 0));
  SurrogateModel model;
  model.hops = cfg.perturbation.hops;
  model.n_hat = dom.size();
  model.feature_dim = dom.feature_dim();
  model.weights = fit_weights(b.inputs, b.responses, b.gammas, cfg.fit);
  const int n_select = cfg.n_select > 0 ? cfg.n_select : default_selection(dom.size());
  Explanation e = extract(dom, node_contributions(model, target),
                          feature_contributions(model, target), n_select);
  e.method = "trap2";
  e.target_class = target;
  e.config = to_json(cfg);
  return e;
}

CenterContribution explain_center(const Graph& g, int center,
                                  const Predictor& predictor,
                                  const ExplainConfig& cfg, int target_class) {
  PerturbationConfig pcfg = cfg.perturbation;
  pcfg.seed = derive_seed(pcfg.seed, static_cast<std::uint64_t>(center));
  const auto dom = translate(g, center, pcfg.hops);
  const Batch b = collect(dom, predictor, pcfg, cfg.workers);
  SurrogateModel model;
  model.hops = pcfg.hops;
  model.n_hat = dom.size();
  model.feature_dim = dom.feature_dim();
  model.weights = fit_weights(b.inputs, b.responses, b.gammas, cfg.fit);
  CenterContribution part;
  part.center = center;
  part.nodes = dom.nodes;
  part.node_scores = node_contributions(model, target_class);
  part.feature_scores = feature_contributions(model, target_class);
  return part;
}

std::pair<std::vector<double>, Eigen::MatrixXd> pool_contributions(
    int n, int feature_dim, std::span<const CenterContribution> parts) {
  std::vector<double> nodes(static_cast<size_t>(n), 0.0);
  Eigen::MatrixXd features = Eigen::MatrixXd::Zero(n, feature_dim);
  for (const auto& part : parts) {
    for (size_t q = 0; q < part.nodes.size(); ++q) {
      const int v = part.nodes[q];
      if (v < 0 || v >= n) throw std::invalid_argument("pooled node out of range");
      nodes[static_cast<size_t>(v)] += part.node_scores[q];
      features.row(v) += part.feature_scores.row(static_cast<Eigen::Index>(q));
    }
  }
  for (auto& s : nodes) s /= static_cast<double>(n);
  features /= static_cast<double>(n);
  return {std::move(nodes), std::move(features)};
}

Explanation explain_graph(const Graph& g, const Predictor& predictor,
                          const ExplainConfig& cfg) {
  if (predictor.task() != Task::kGraph) {
    throw std::invalid_argument("explain_graph needs a graph-task predictor");
  }
  const int n = g.num_nodes();
  if (n == 0) throw GraphError("cannot explain an empty graph");
  const int target = argmax(predictor.response(g.adjacency, g.features, 0));
  std::vector<CenterContribution> parts(static_cast<size_t>(n));
  ExplainConfig inner = cfg;
  inner.workers = 1;
  parallel_for(n, cfg.workers, [&](int i) {
    parts[static_cast<size_t>(i)] = explain_center(g, i, predictor, inner, target);
  });
  auto [scores, features] = pool_contributions(n, g.feature_dim(), parts);
  std::vector<int> nodes(static_cast<size_t>(n));
  std::iota(nodes.begin(), nodes.end(), 0);
  const int n_select = cfg.n_select > 0 ? cfg.n_select : default_selection(n);
  Explanation e = extract(nodes, g.adjacency, std::move(scores),
                          std::move(features), n_select);
  e.method = "trap2";
  e.center = -1;
  e.target_class = target;
  e.config = to_json(cfg);
  return e;
}

}  // namespace trap2
