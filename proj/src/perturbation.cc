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

#include "trap2/perturbation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "trap2/parallel.hpp"

namespace trap2 {
namespace {

Eigen::VectorXd reach_row(const std::vector<int>& dist, int k) {
  Eigen::VectorXd row(static_cast<Eigen::Index>(dist.size()));
  for (size_t j = 0; j < dist.size(); ++j) {
    row[static_cast<Eigen::Index>(j)] = (dist[j] >= 0 && dist[j] <= k) ? 1 : 0;
  }
  return row;
}

}  // namespace

std::string_view to_string(StructurePattern p) {
  switch (p) {
    case StructurePattern::kAdding:
      return "adding";
    case StructurePattern::kRemoving:
      return "removing";
    case StructurePattern::kAddingAndRemoving:
      return "adding-and-removing";
    case StructurePattern::kNone:
      return "none";
  }
  return "unknown";
}

std::string_view to_string(FeaturePattern p) {
  switch (p) {
    case FeaturePattern::kMasking:
      return "masking";
    case FeaturePattern::kScaling:
      return "scaling";
    case FeaturePattern::kNone:
      return "none";
  }
  return "unknown";
}

StructurePattern parse_structure_pattern(std::string_view name) {
  for (auto p : {StructurePattern::kAdding, StructurePattern::kRemoving,
                 StructurePattern::kAddingAndRemoving,
                 StructurePattern::kNone}) {
    if (to_string(p) == name) return p;
  }
  throw std::invalid_argument("unknown structure pattern '" +
                              std::string(name) + "'");
}

FeaturePattern parse_feature_pattern(std::string_view name) {
  for (auto p :
       {FeaturePattern::kMasking, FeaturePattern::kScaling,
        FeaturePattern::kNone}) {
    if (to_string(p) == name) return p;
  }
  throw std::invalid_argument("unknown feature pattern '" + std::string(name) +
                              "'");
}

void PerturbationConfig::validate() const {
  if (!(p1 >= 0.0 && p1 <= 1.0)) throw std::invalid_argument("p1 must be in [0, 1]");
  if (!(p2 >= 0.0 && p2 <= 1.0)) throw std::invalid_argument("p2 must be in [0, 1]");
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  if (hops < 1) throw std::invalid_argument("hops must be >= 1");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be > 0");
  if (!(lambda_a >= 0.0) || !(lambda_x >= 0.0)) {
    throw std::invalid_argument("energy weights must be >= 0");
  }
  if (lambda_a == 0.0 && lambda_x == 0.0) {
    throw std::invalid_argument("lambda_a and lambda_x cannot both be 0");
  }
}

nlohmann::json to_json(const PerturbationConfig& cfg) {
  return {{"structure_pattern", std::string(to_string(cfg.structure))},
          {"feature_pattern", std::string(to_string(cfg.feature))},
          {"p1", cfg.p1},
          {"p2", cfg.p2},
          {"protect_one_hop", cfg.protect_one_hop},
          {"m", cfg.samples},
          {"K", cfg.hops},
          {"delta", cfg.delta},
          {"lambda_A", cfg.lambda_a},
          {"lambda_X", cfg.lambda_x},
          {"seed", cfg.seed},
          {"literal_cosine", cfg.literal_cosine},
          {"normalize_feature_energy", cfg.normalize_feature_energy}};
}

PerturbationConfig perturbation_config_from_json(const nlohmann::json& j) {
  PerturbationConfig cfg;
  if (j.contains("structure_pattern")) {
    cfg.structure =
        parse_structure_pattern(j.at("structure_pattern").get<std::string>());
  }
  if (j.contains("feature_pattern")) {
    cfg.feature =
        parse_feature_pattern(j.at("feature_pattern").get<std::string>());
  }
  cfg.p1 = j.value("p1", cfg.p1);
  cfg.p2 = j.value("p2", cfg.p2);
  cfg.protect_one_hop = j.value("protect_one_hop", cfg.protect_one_hop);
  cfg.samples = j.value("m", cfg.samples);
  cfg.hops = j.value("K", cfg.hops);
  cfg.delta = j.value("delta", cfg.delta);
  cfg.lambda_a = j.value("lambda_A", cfg.lambda_a);
  cfg.lambda_x = j.value("lambda_X", cfg.lambda_x);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.literal_cosine = j.value("literal_cosine", cfg.literal_cosine);
  cfg.normalize_feature_energy =
      j.value("normalize_feature_energy", cfg.normalize_feature_energy);
  return cfg;
}

Adjacency perturb_structure(const InterpretationDomain& dom,
                            const PerturbationConfig& cfg, Rng& rng) {
  Adjacency a = dom.adjacency;
  if (cfg.structure == StructurePattern::kNone) return a;
  const Eigen::Index n = a.rows();
  const double flip = 1.0 - cfg.p1;
  // Row-major over the upper triangle; draws happen only for pairs the
  // pattern may change, which keeps the stream short for sparse domains.
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = r + 1; c < n; ++c) {
      const bool edge = dom.adjacency(r, c) != 0;
      if (cfg.protect_one_hop && r == 0 && edge) continue;
      bool draw = false;
      switch (cfg.structure) {
        case StructurePattern::kRemoving:
          draw = edge;
          break;
        case StructurePattern::kAdding:
          draw = !edge;
          break;
        case StructurePattern::kAddingAndRemoving:
          draw = true;
          break;
        case StructurePattern::kNone:
          break;
      }
      if (!draw) continue;
      if (uniform01(rng) < flip) {
        const std::uint8_t v = edge ? 0 : 1;
        a(r, c) = v;
        a(c, r) = v;
      }
    }
  }
  return a;
}

Features perturb_features(const InterpretationDomain& dom,
                          const PerturbationConfig& cfg, Rng& rng) {
  Features x = dom.features;
  switch (cfg.feature) {
    case FeaturePattern::kNone:
      break;
    case FeaturePattern::kMasking:
      for (Eigen::Index r = 0; r < x.rows(); ++r) {
        for (Eigen::Index c = 0; c < x.cols(); ++c) {
          if (!(uniform01(rng) < cfg.p2)) x(r, c) = 0.0;
        }
      }
      break;
    case FeaturePattern::kScaling: {
      std::normal_distribution<double> normal(0.0, 1.0);
      for (Eigen::Index r = 0; r < x.rows(); ++r) {
        for (Eigen::Index c = 0; c < x.cols(); ++c) x(r, c) *= normal(rng);
      }
      break;
    }
  }
  return x;
}

Eigen::VectorXd hop_weights(int hops) {
  if (hops < 1) throw std::invalid_argument("hop count must be >= 1");
  Eigen::VectorXd w(hops);
  for (int k = 1; k <= hops; ++k) {
    w[k - 1] = static_cast<double>(hops) / static_cast<double>(k + 1);
  }
  const Eigen::VectorXd e = (w.array() - w.maxCoeff()).exp();
  return e / e.sum();
}

double cosine_distance(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  if (u.size() != v.size()) {
    throw std::invalid_argument("cosine distance of vectors of unequal length");
  }
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0.0 && nv == 0.0) return 0.0;
  if (nu == 0.0 || nv == 0.0) return 1.0;
  return 1.0 - u.dot(v) / (nu * nv);
}

double sim(const Eigen::VectorXd& u, const Eigen::VectorXd& v, double delta,
           bool literal) {
  const double dist = cosine_distance(u, v);
  const double d = literal ? 1.0 - dist : dist;
  return std::exp(-(d * d) / (delta * delta));
}

double energy_structure(const InterpretationDomain& dom, const Adjacency& a_p,
                        int hops, double delta, bool literal) {
  if (a_p.rows() != dom.adjacency.rows() || a_p.cols() != dom.adjacency.cols()) {
    throw std::invalid_argument("perturbed adjacency has the wrong shape");
  }
  const Eigen::VectorXd alpha = hop_weights(hops);
  const auto d_i = hop_distances(dom.adjacency, 0, hops);
  const auto d_p = hop_distances(a_p, 0, hops);
  double gamma = 0.0;
  for (int k = 1; k <= hops; ++k) {
    gamma += alpha[k - 1] * sim(reach_row(d_p, k), reach_row(d_i, k), delta,
                                literal);
  }
  return gamma;
}

double energy_feature(const InterpretationDomain& dom, const Features& x_p,
                      double delta, bool literal, bool normalize) {
  if (x_p.rows() != dom.features.rows() || x_p.cols() != dom.features.cols()) {
    throw std::invalid_argument("perturbed features have the wrong shape");
  }
  double gamma = 0.0;
  for (Eigen::Index r = 0; r < x_p.rows(); ++r) {
    gamma += sim(x_p.row(r).transpose(), dom.features.row(r).transpose(),
                 delta, literal);
  }
  return normalize ? gamma / static_cast<double>(x_p.rows()) : gamma;
}

double energy_total(double gamma_a, double gamma_x, double lambda_a,
                    double lambda_x) {
  return lambda_a * gamma_a + lambda_x * gamma_x;
}

PerturbedInstance draw_instance(const InterpretationDomain& dom,
                                const PerturbationConfig& cfg, int j) {
  Rng rng = make_stream(cfg.seed, static_cast<std::uint64_t>(j));
  PerturbedInstance inst;
  inst.adjacency = perturb_structure(dom, cfg, rng);
  inst.features = perturb_features(dom, cfg, rng);
  double gamma_a = 0.0;
  double gamma_x = 0.0;
  if (cfg.lambda_a != 0.0) {
    gamma_a = energy_structure(dom, inst.adjacency, cfg.hops, cfg.delta,
                               cfg.literal_cosine);
  }
  if (cfg.lambda_x != 0.0) {
    gamma_x = energy_feature(dom, inst.features, cfg.delta, cfg.literal_cosine,
                             cfg.normalize_feature_energy);
  }
  inst.gamma = energy_total(gamma_a, gamma_x, cfg.lambda_a, cfg.lambda_x);
  return inst;
}

std::vector<PerturbedInstance> sample_batch(const InterpretationDomain& dom,
                                            const Predictor& predictor,
                                            const PerturbationConfig& cfg,
                                            int workers) {
  cfg.validate();
  if (predictor.feature_dim() != dom.feature_dim()) {
    throw std::invalid_argument("predictor expects " +
                                std::to_string(predictor.feature_dim()) +
                                " features, domain has " +
                                std::to_string(dom.feature_dim()));
  }
  std::vector<PerturbedInstance> batch(static_cast<size_t>(cfg.samples));
  parallel_for(cfg.samples, workers, [&](int j) {
    PerturbedInstance inst = draw_instance(dom, cfg, j);
    inst.response = predictor.response(inst.adjacency, inst.features, 0);
    batch[static_cast<size_t>(j)] = std::move(inst);
  });
  return batch;
}

}  // namespace trap2
