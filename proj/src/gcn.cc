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

#include "trap2/gcn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <Eigen/SparseCore>

#include "trap2/random.hpp"

namespace trap2 {
namespace {

using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

SparseMatrix normalized_propagation(const Adjacency& a, Aggregation agg) {
  const Eigen::Index n = a.rows();
  std::vector<double> scale(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    double degree = 1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) degree += a(i, j);
    }
    scale[static_cast<size_t>(i)] =
        agg == Aggregation::kSum ? 1.0 : 1.0 / std::sqrt(degree);
  }
  std::vector<Eigen::Triplet<double>> entries;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double si = scale[static_cast<size_t>(i)];
    entries.emplace_back(i, i, si * si);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i && a(i, j) != 0) {
        entries.emplace_back(i, j, si * scale[static_cast<size_t>(j)]);
      }
    }
  }
  SparseMatrix s(n, n);
  s.setFromTriplets(entries.begin(), entries.end());
  return s;
}

// Dense variant over a real-valued adjacency; the diagonal of `a` is taken as
// given and one is added to it.
MatrixXd normalized_propagation(const MatrixXd& a, Aggregation agg,
                                Eigen::VectorXd* scale_out) {
  MatrixXd m = a;
  m.diagonal().array() += 1.0;
  if (agg == Aggregation::kSum) {
    if (scale_out != nullptr) *scale_out = Eigen::VectorXd::Ones(a.rows());
    return m;
  }
  const Eigen::VectorXd degree = m.rowwise().sum();
  const Eigen::VectorXd scale = degree.array().rsqrt();
  if (scale_out != nullptr) *scale_out = scale;
  return scale.asDiagonal() * m * scale.asDiagonal();
}

struct Forward {
  std::vector<MatrixXd> propagated;  // S H_{l-1}
  std::vector<MatrixXd> pre;         // Z_l
  std::vector<MatrixXd> act;         // act[0] = X, act[l] = relu(Z_l)
  MatrixXd concat;
  MatrixXd logits;
  MatrixXd probs;
};

MatrixXd softmax_rows(const MatrixXd& logits) {
  MatrixXd out(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double top = logits.row(i).maxCoeff();
    const RowVectorXd e = (logits.row(i).array() - top).exp();
    out.row(i) = e / e.sum();
  }
  return out;
}

template <typename Propagation>
Forward run_forward(const GcnConfig& cfg, const GcnParameters& p,
                    const Propagation& s, const Features& x) {
  Forward f;
  const Eigen::Index n = x.rows();
  f.act.push_back(x);
  f.concat.resize(n, cfg.depth * cfg.hidden);
  for (int l = 0; l < cfg.depth; ++l) {
    MatrixXd prop = s * f.act.back();
    MatrixXd z = prop * p.weights[static_cast<size_t>(l)];
    if (cfg.self_weight) z += f.act.back() * p.self_weights[static_cast<size_t>(l)];
    z.rowwise() += p.biases[static_cast<size_t>(l)];
    MatrixXd h = z.cwiseMax(0.0);
    f.concat.middleCols(l * cfg.hidden, cfg.hidden) = h;
    f.propagated.push_back(std::move(prop));
    f.pre.push_back(std::move(z));
    f.act.push_back(std::move(h));
  }
  if (cfg.task == Task::kNode) {
    f.logits = f.concat * p.head_weight;
    f.logits.rowwise() += p.head_bias;
  } else {
    const RowVectorXd pooled =
        n > 0 ? RowVectorXd(f.concat.colwise().mean())
              : RowVectorXd::Zero(f.concat.cols());
    f.logits = pooled * p.head_weight + p.head_bias;
  }
  f.probs = softmax_rows(f.logits);
  return f;
}

struct Backward {
  GcnParameters grads;
  MatrixXd d_features;
  MatrixXd d_propagation;  // dL/dS, only when requested
};

template <typename Propagation>
Backward run_backward(const GcnConfig& cfg, const GcnParameters& p,
                      const Propagation& s, const Forward& f,
                      const MatrixXd& d_logits, bool want_propagation) {
  Backward b;
  const Eigen::Index n = f.act[0].rows();
  MatrixXd d_concat;
  if (cfg.task == Task::kNode) {
    b.grads.head_weight = f.concat.transpose() * d_logits;
    b.grads.head_bias = d_logits.colwise().sum();
    d_concat = d_logits * p.head_weight.transpose();
  } else {
    const RowVectorXd pooled = f.concat.colwise().mean();
    b.grads.head_weight = pooled.transpose() * d_logits;
    b.grads.head_bias = d_logits.row(0);
    const RowVectorXd d_pooled = d_logits.row(0) * p.head_weight.transpose();
    d_concat = MatrixXd::Ones(n, 1) * (d_pooled / static_cast<double>(n));
  }
  b.grads.weights.resize(static_cast<size_t>(cfg.depth));
  b.grads.biases.resize(static_cast<size_t>(cfg.depth));
  if (cfg.self_weight) b.grads.self_weights.resize(static_cast<size_t>(cfg.depth));
  if (want_propagation) b.d_propagation = MatrixXd::Zero(n, n);

  MatrixXd d_act = d_concat.middleCols((cfg.depth - 1) * cfg.hidden, cfg.hidden);
  for (int l = cfg.depth - 1; l >= 0; --l) {
    const auto li = static_cast<size_t>(l);
    const MatrixXd d_pre =
        d_act.cwiseProduct((f.pre[li].array() > 0.0).cast<double>().matrix());
    b.grads.weights[li] = f.propagated[li].transpose() * d_pre;
    b.grads.biases[li] = d_pre.colwise().sum();
    const MatrixXd d_prop = d_pre * p.weights[li].transpose();
    if (want_propagation) b.d_propagation += d_prop * f.act[li].transpose();
    MatrixXd d_below = s.transpose() * d_prop;
    if (cfg.self_weight) {
      b.grads.self_weights[li] = f.act[li].transpose() * d_pre;
      d_below += d_pre * p.self_weights[li].transpose();
    }
    if (l > 0) {
      d_below += d_concat.middleCols((l - 1) * cfg.hidden, cfg.hidden);
      d_act = std::move(d_below);
    } else {
      b.d_features = std::move(d_below);
    }
  }
  return b;
}

MatrixXd matrix_from_json(const nlohmann::json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows > 0 ? static_cast<Eigen::Index>(j[0].size()) : 0;
  MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(j[r].size()) != cols) {
      throw std::runtime_error("ragged matrix in model file");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

nlohmann::json matrix_to_json(const MatrixXd& m) {
  auto out = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    auto row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

RowVectorXd row_from_json(const nlohmann::json& j) {
  RowVectorXd v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = j[i].get<double>();
  return v;
}

nlohmann::json row_to_json(const RowVectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

void apply_step(GcnParameters& p, const GcnParameters& g, double lr,
                double weight_decay) {
  for (size_t l = 0; l < p.weights.size(); ++l) {
    p.weights[l] -= lr * (g.weights[l] + weight_decay * p.weights[l]);
    p.biases[l] -= lr * g.biases[l];
  }
  for (size_t l = 0; l < p.self_weights.size(); ++l) {
    p.self_weights[l] -= lr * (g.self_weights[l] + weight_decay * p.self_weights[l]);
  }
  p.head_weight -= lr * (g.head_weight + weight_decay * p.head_weight);
  p.head_bias -= lr * g.head_bias;
}

// First/second moment estimates for Adam.
struct AdamState {
  GcnParameters m;
  GcnParameters v;
  int step = 0;
};

template <typename T>
void adam_update(T& param, const T& grad, T& m, T& v, double lr, double bc1,
                 double bc2) {
  constexpr double kBeta1 = 0.9;
  constexpr double kBeta2 = 0.999;
  constexpr double kEps = 1e-8;
  m = kBeta1 * m + (1.0 - kBeta1) * grad;
  v = kBeta2 * v + (1.0 - kBeta2) * grad.cwiseProduct(grad);
  param.array() -=
      lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + kEps);
}

void apply_adam(GcnParameters& p, GcnParameters g, AdamState& st, double lr,
                double weight_decay) {
  if (st.step == 0) {
    st.m = p;
    st.v = p;
    for (size_t l = 0; l < p.weights.size(); ++l) {
      st.m.weights[l].setZero();
      st.v.weights[l].setZero();
      st.m.biases[l].setZero();
      st.v.biases[l].setZero();
    }
    for (size_t l = 0; l < p.self_weights.size(); ++l) {
      st.m.self_weights[l].setZero();
      st.v.self_weights[l].setZero();
    }
    st.m.head_weight.setZero();
    st.v.head_weight.setZero();
    st.m.head_bias.setZero();
    st.v.head_bias.setZero();
  }
  ++st.step;
  const double bc1 = 1.0 - std::pow(0.9, st.step);
  const double bc2 = 1.0 - std::pow(0.999, st.step);
  for (size_t l = 0; l < p.weights.size(); ++l) {
    g.weights[l] += weight_decay * p.weights[l];
    adam_update(p.weights[l], g.weights[l], st.m.weights[l], st.v.weights[l],
                lr, bc1, bc2);
    adam_update(p.biases[l], g.biases[l], st.m.biases[l], st.v.biases[l], lr,
                bc1, bc2);
  }
  for (size_t l = 0; l < p.self_weights.size(); ++l) {
    g.self_weights[l] += weight_decay * p.self_weights[l];
    adam_update(p.self_weights[l], g.self_weights[l], st.m.self_weights[l],
                st.v.self_weights[l], lr, bc1, bc2);
  }
  g.head_weight += weight_decay * p.head_weight;
  adam_update(p.head_weight, g.head_weight, st.m.head_weight, st.v.head_weight,
              lr, bc1, bc2);
  adam_update(p.head_bias, g.head_bias, st.m.head_bias, st.v.head_bias, lr,
              bc1, bc2);
}

void accumulate(GcnParameters& total, const GcnParameters& g) {
  if (total.weights.empty()) {
    total = g;
    return;
  }
  for (size_t l = 0; l < total.weights.size(); ++l) {
    total.weights[l] += g.weights[l];
    total.biases[l] += g.biases[l];
  }
  for (size_t l = 0; l < total.self_weights.size(); ++l) {
    total.self_weights[l] += g.self_weights[l];
  }
  total.head_weight += g.head_weight;
  total.head_bias += g.head_bias;
}

std::vector<int> shuffled(std::vector<int> items, std::uint64_t seed) {
  Rng rng = make_stream(seed, 1);
  // Fisher-Yates with explicit draws keeps the permutation stable across
  // standard library implementations.
  for (size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<size_t>(uniform01(rng) * static_cast<double>(i));
    std::swap(items[i - 1], items[std::min(j, i - 1)]);
  }
  return items;
}

std::pair<std::vector<int>, std::vector<int>> split_items(
    std::vector<int> items, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("train fraction must be in (0, 1]");
  }
  items = shuffled(std::move(items), seed);
  const auto cut = static_cast<size_t>(
      std::lround(fraction * static_cast<double>(items.size())));
  std::vector<int> train(items.begin(), items.begin() + static_cast<long>(cut));
  std::vector<int> test(items.begin() + static_cast<long>(cut), items.end());
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {train, test};
}

}  // namespace

std::string_view to_string(Task task) {
  return task == Task::kNode ? "node" : "graph";
}

Task parse_task(std::string_view name) {
  if (name == "node") return Task::kNode;
  if (name == "graph") return Task::kGraph;
  throw std::invalid_argument("unknown task '" + std::string(name) + "'");
}

int argmax(const Eigen::RowVectorXd& row) {
  int best = 0;
  for (Eigen::Index c = 1; c < row.size(); ++c) {
    if (row(c) > row(best)) best = static_cast<int>(c);
  }
  return best;
}

void GcnConfig::validate() const {
  if (input_dim < 1 || hidden < 1 || num_classes < 2 || depth < 1) {
    throw std::invalid_argument(
        "GCN needs input_dim >= 1, hidden >= 1, num_classes >= 2, depth >= 1");
  }
}

ReferenceGcn ReferenceGcn::zeros(const GcnConfig& config) {
  config.validate();
  ReferenceGcn model(config);
  auto& p = model.params_;
  int in = config.input_dim;
  for (int l = 0; l < config.depth; ++l) {
    p.weights.push_back(MatrixXd::Zero(in, config.hidden));
    p.biases.push_back(RowVectorXd::Zero(config.hidden));
    if (config.self_weight) p.self_weights.push_back(MatrixXd::Zero(in, config.hidden));
    in = config.hidden;
  }
  p.head_weight = MatrixXd::Zero(config.depth * config.hidden, config.num_classes);
  p.head_bias = RowVectorXd::Zero(config.num_classes);
  return model;
}

ReferenceGcn ReferenceGcn::initialize(const GcnConfig& config,
                                      std::uint64_t seed) {
  ReferenceGcn model = zeros(config);
  Rng rng = make_stream(seed, 0);
  auto glorot = [&rng](MatrixXd& w) {
    const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
    for (Eigen::Index c = 0; c < w.cols(); ++c) {
      for (Eigen::Index r = 0; r < w.rows(); ++r) {
        w(r, c) = (2.0 * uniform01(rng) - 1.0) * limit;
      }
    }
  };
  for (auto& w : model.params_.weights) glorot(w);
  for (auto& w : model.params_.self_weights) glorot(w);
  glorot(model.params_.head_weight);
  return model;
}

void ReferenceGcn::check_input(Eigen::Index n, const Features& x) const {
  if (x.rows() != n) {
    throw std::invalid_argument("feature rows do not match adjacency size");
  }
  if (x.cols() != config_.input_dim) {
    throw std::invalid_argument("feature dimension " + std::to_string(x.cols()) +
                                " does not match model input dimension " +
                                std::to_string(config_.input_dim));
  }
}

MatrixXd ReferenceGcn::predict(const Adjacency& a, const Features& x) const {
  if (a.rows() != a.cols()) throw std::invalid_argument("adjacency not square");
  check_input(a.rows(), x);
  const SparseMatrix s = normalized_propagation(a, config_.aggregation);
  return run_forward(config_, params_, s, x).probs;
}

MatrixXd ReferenceGcn::predict_relaxed(const MatrixXd& a,
                                       const Features& x) const {
  check_input(a.rows(), x);
  const MatrixXd s = normalized_propagation(a, config_.aggregation, nullptr);
  return run_forward(config_, params_, s, x).probs;
}

InputGradients ReferenceGcn::input_gradients(const Adjacency& a,
                                             const Features& x, int target,
                                             std::optional<int> node) const {
  check_input(a.rows(), x);
  if (target < 0 || target >= config_.num_classes) {
    throw std::invalid_argument("target class out of range");
  }
  const Eigen::Index n = a.rows();
  const MatrixXd relaxed = a.cast<double>();
  Eigen::VectorXd scale;
  const MatrixXd s = normalized_propagation(relaxed, config_.aggregation, &scale);
  const Forward f = run_forward(config_, params_, s, x);

  MatrixXd d_logits = MatrixXd::Zero(f.logits.rows(), f.logits.cols());
  Eigen::Index row = 0;
  if (config_.task == Task::kNode) {
    if (!node || *node < 0 || *node >= n) {
      throw std::invalid_argument("node task gradients need a valid node");
    }
    row = *node;
  }
  // d(-log p_target)/dlogits = p - onehot.
  d_logits.row(row) = f.probs.row(row);
  d_logits(row, target) -= 1.0;

  const Backward b = run_backward(config_, params_, s, f, d_logits, true);

  // S_ij = s_i M_ij s_j with M = A + I and s_i = (sum_j M_ij)^-1/2.
  MatrixXd m = relaxed;
  m.diagonal().array() += 1.0;
  const MatrixXd& ds = b.d_propagation;
  Eigen::VectorXd d_scale = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double g = ds(i, j) * m(i, j);
      d_scale(i) += g * scale(j);
      d_scale(j) += g * scale(i);
    }
  }
  InputGradients out;
  out.features = b.d_features;
  if (config_.aggregation == Aggregation::kSum) {
    out.adjacency = ds;
    return out;
  }
  out.adjacency.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double via_degree = -0.5 * std::pow(scale(i), 3) * d_scale(i);
    for (Eigen::Index j = 0; j < n; ++j) {
      out.adjacency(i, j) = ds(i, j) * scale(i) * scale(j) + via_degree;
    }
  }
  return out;
}

nlohmann::json ReferenceGcn::to_json() const {
  nlohmann::json j;
  j["format"] = "trap2-gcn";
  j["task"] = std::string(to_string(config_.task));
  j["input_dim"] = config_.input_dim;
  j["hidden"] = config_.hidden;
  j["num_classes"] = config_.num_classes;
  j["depth"] = config_.depth;
  j["aggregation"] =
      config_.aggregation == Aggregation::kSum ? "sum" : "symmetric";
  j["self_weight"] = config_.self_weight;
  auto layers = nlohmann::json::array();
  for (size_t l = 0; l < params_.weights.size(); ++l) {
    nlohmann::json layer = {{"weight", matrix_to_json(params_.weights[l])},
                            {"bias", row_to_json(params_.biases[l])}};
    if (config_.self_weight) {
      layer["self_weight"] = matrix_to_json(params_.self_weights[l]);
    }
    layers.push_back(std::move(layer));
  }
  j["layers"] = std::move(layers);
  j["head"] = {{"weight", matrix_to_json(params_.head_weight)},
               {"bias", row_to_json(params_.head_bias)}};
  return j;
}

ReferenceGcn ReferenceGcn::from_json(const nlohmann::json& j) {
  try {
    GcnConfig cfg;
    cfg.task = parse_task(j.at("task").get<std::string>());
    cfg.input_dim = j.at("input_dim").get<int>();
    cfg.hidden = j.at("hidden").get<int>();
    cfg.num_classes = j.at("num_classes").get<int>();
    cfg.depth = j.at("depth").get<int>();
    const auto agg = j.value("aggregation", std::string("sum"));
    if (agg == "sum") {
      cfg.aggregation = Aggregation::kSum;
    } else if (agg == "symmetric") {
      cfg.aggregation = Aggregation::kSymmetric;
    } else {
      throw std::runtime_error("unknown aggregation '" + agg + "'");
    }
    cfg.self_weight = j.value("self_weight", false);
    ReferenceGcn model = zeros(cfg);
    const auto& layers = j.at("layers");
    if (static_cast<int>(layers.size()) != cfg.depth) {
      throw std::runtime_error("model file layer count does not match depth");
    }
    auto& p = model.params_;
    for (int l = 0; l < cfg.depth; ++l) {
      const auto li = static_cast<size_t>(l);
      MatrixXd w = matrix_from_json(layers[li].at("weight"));
      RowVectorXd b = row_from_json(layers[li].at("bias"));
      if (w.rows() != p.weights[li].rows() || w.cols() != p.weights[li].cols() ||
          b.size() != p.biases[li].size()) {
        throw std::runtime_error("model file layer shape mismatch");
      }
      p.weights[li] = std::move(w);
      p.biases[li] = std::move(b);
      if (cfg.self_weight) {
        MatrixXd ws = matrix_from_json(layers[li].at("self_weight"));
        if (ws.rows() != p.self_weights[li].rows() ||
            ws.cols() != p.self_weights[li].cols()) {
          throw std::runtime_error("model file self-weight shape mismatch");
        }
        p.self_weights[li] = std::move(ws);
      }
    }
    MatrixXd hw = matrix_from_json(j.at("head").at("weight"));
    RowVectorXd hb = row_from_json(j.at("head").at("bias"));
    if (hw.rows() != p.head_weight.rows() || hw.cols() != p.head_weight.cols() ||
        hb.size() != p.head_bias.size()) {
      throw std::runtime_error("model file head shape mismatch");
    }
    p.head_weight = std::move(hw);
    p.head_bias = std::move(hb);
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("malformed model JSON: ") + e.what());
  }
}

TrainReport train(ReferenceGcn& model, const Graph& g, const TrainConfig& cfg) {
  if (model.task() != Task::kNode) {
    throw std::invalid_argument("node training needs a node-task model");
  }
  if (!g.node_labels) throw std::invalid_argument("graph has no node labels");
  g.validate();
  if (g.feature_dim() != model.feature_dim()) {
    throw std::invalid_argument("graph feature dimension does not match model");
  }
  const int n = g.num_nodes();
  const auto& labels = *g.node_labels;
  for (int y : labels) {
    if (y < 0 || y >= model.num_classes()) {
      throw std::invalid_argument("node label out of range for the model");
    }
  }
  std::vector<int> all(static_cast<size_t>(n));
  std::iota(all.begin(), all.end(), 0);
  auto [train_nodes, test_nodes] = split_items(all, cfg.train_fraction, cfg.seed);

  TrainReport report;
  report.epochs = cfg.epochs;
  const SparseMatrix s = normalized_propagation(g.adjacency, model.config_.aggregation);
  const double inv = 1.0 / static_cast<double>(std::max<size_t>(1, train_nodes.size()));
  AdamState adam;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const Forward f = run_forward(model.config_, model.params_, s, g.features);
    MatrixXd d_logits = MatrixXd::Zero(n, model.num_classes());
    double loss = 0.0;
    for (int i : train_nodes) {
      const int y = labels[static_cast<size_t>(i)];
      loss -= std::log(std::max(f.probs(i, y), 1e-300));
      d_logits.row(i) = f.probs.row(i) * inv;
      d_logits(i, y) -= inv;
    }
    report.final_loss = loss * inv;
    const Backward b =
        run_backward(model.config_, model.params_, s, f, d_logits, false);
    if (cfg.optimizer == Optimizer::kAdam) {
      apply_adam(model.params_, b.grads, adam, cfg.learning_rate,
                 cfg.weight_decay);
    } else {
      apply_step(model.params_, b.grads, cfg.learning_rate, cfg.weight_decay);
    }
  }
  report.train_accuracy = node_accuracy(model, g, train_nodes);
  report.test_accuracy = node_accuracy(model, g, test_nodes);
  report.train_items = std::move(train_nodes);
  report.test_items = std::move(test_nodes);
  return report;
}

TrainReport train(ReferenceGcn& model, std::span<const Graph> graphs,
                  const TrainConfig& cfg) {
  if (model.task() != Task::kGraph) {
    throw std::invalid_argument("graph training needs a graph-task model");
  }
  std::vector<SparseMatrix> props;
  for (const auto& g : graphs) {
    if (!g.graph_label) throw std::invalid_argument("graph has no graph label");
    if (*g.graph_label < 0 || *g.graph_label >= model.num_classes()) {
      throw std::invalid_argument("graph label out of range for the model");
    }
    g.validate();
    props.push_back(normalized_propagation(g.adjacency, model.config_.aggregation));
  }
  std::vector<int> all(graphs.size());
  std::iota(all.begin(), all.end(), 0);
  auto [train_graphs, test_graphs] =
      split_items(all, cfg.train_fraction, cfg.seed);

  TrainReport report;
  report.epochs = cfg.epochs;
  const double inv =
      1.0 / static_cast<double>(std::max<size_t>(1, train_graphs.size()));
  AdamState adam;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    GcnParameters total;
    double loss = 0.0;
    for (int gi : train_graphs) {
      const auto& g = graphs[static_cast<size_t>(gi)];
      const auto& s = props[static_cast<size_t>(gi)];
      const Forward f = run_forward(model.config_, model.params_, s, g.features);
      const int y = *g.graph_label;
      loss -= std::log(std::max(f.probs(0, y), 1e-300));
      MatrixXd d_logits = f.probs * inv;
      d_logits(0, y) -= inv;
      accumulate(total,
                 run_backward(model.config_, model.params_, s, f, d_logits, false)
                     .grads);
    }
    report.final_loss = loss * inv;
    if (total.weights.empty()) continue;
    if (cfg.optimizer == Optimizer::kAdam) {
      apply_adam(model.params_, std::move(total), adam, cfg.learning_rate,
                 cfg.weight_decay);
    } else {
      apply_step(model.params_, total, cfg.learning_rate, cfg.weight_decay);
    }
  }
  auto graph_accuracy = [&](const std::vector<int>& items) {
    if (items.empty()) return 0.0;
    int hits = 0;
    for (int gi : items) {
      const auto& g = graphs[static_cast<size_t>(gi)];
      const RowVectorXd p = model.predict(g.adjacency, g.features).row(0);
      hits += argmax(p) == *g.graph_label ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(items.size());
  };
  report.train_accuracy = graph_accuracy(train_graphs);
  report.test_accuracy = graph_accuracy(test_graphs);
  report.train_items = std::move(train_graphs);
  report.test_items = std::move(test_graphs);
  return report;
}

double node_accuracy(const Predictor& model, const Graph& g,
                     std::span<const int> nodes) {
  if (nodes.empty() || !g.node_labels) return 0.0;
  const MatrixXd p = model.predict(g.adjacency, g.features);
  int hits = 0;
  for (int i : nodes) {
    hits += argmax(p.row(i)) == (*g.node_labels)[static_cast<size_t>(i)] ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(nodes.size());
}

void save_model(const ReferenceGcn& model, const std::filesystem::path& path,
                bool black_box) {
  auto j = model.to_json();
  j["black_box"] = black_box;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump() << '\n';
}

namespace {

nlohmann::json read_model_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed JSON in " + path.string() + ": " +
                             e.what());
  }
}

}  // namespace

ReferenceGcn load_reference_model(const std::filesystem::path& path) {
  return ReferenceGcn::from_json(read_model_json(path));
}

std::shared_ptr<const Predictor> load_predictor(
    const std::filesystem::path& path) {
  const auto j = read_model_json(path);
  auto model = std::make_shared<const ReferenceGcn>(ReferenceGcn::from_json(j));
  if (j.value("black_box", false)) {
    return std::make_shared<const BlackBoxPredictor>(std::move(model));
  }
  return model;
}

}  // namespace trap2
