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

#include "trap2/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "trap2/baselines.hpp"
#include "trap2/evaluation.hpp"
#include "trap2/explanation.hpp"
#include "trap2/gcn.hpp"
#include "trap2/graph.hpp"
#include "trap2/paraphrase.hpp"
#include "trap2/perturbation.hpp"
#include "trap2/synthetic.hpp"
#include "trap2/translation.hpp"

namespace trap2 {
namespace {

namespace fs = std::filesystem;

// Usage problems found after parsing (bad file paths, bad combinations).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("bad config " + path.string() + ": " + e.what());
  }
}

// Value of --config in argv, found before the parser runs so that file
// values become the defaults that flags then override.
std::string find_config(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return argv[i + 1];
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  return {};
}

void require_file(const std::string& path, const char* what) {
  if (!fs::is_regular_file(path)) {
    throw UsageError(std::string(what) + " file not found: " + path);
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

struct ExplainFlags {
  std::string structure = "removing";
  std::string feature = "masking";
  std::string weight_mode = "inverse";
};

void add_explain_options(CLI::App* cmd, ExplainConfig& cfg, ExplainFlags& f) {
  auto& p = cfg.perturbation;
  f.structure = std::string(to_string(p.structure));
  f.feature = std::string(to_string(p.feature));
  f.weight_mode = std::string(to_string(cfg.fit.weight_mode));
  cmd->add_option("--structure-pattern", f.structure, "Edge perturbation")
      ->check(CLI::IsMember(
          {"adding", "removing", "adding-and-removing", "none"}))
      ->capture_default_str();
  cmd->add_option("--feature-pattern", f.feature, "Feature perturbation")
      ->check(CLI::IsMember({"masking", "scaling", "none"}))
      ->capture_default_str();
  cmd->add_option("--p1", p.p1, "Edge keep probability")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--p2", p.p2, "Feature keep probability")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_flag("--protect-one-hop,!--no-protect-one-hop", p.protect_one_hop,
                "Never perturb edges at the explained node (default: on)")
      ->capture_default_str();
  cmd->add_option("-m,--samples", p.samples, "Perturbations per node")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("-k,--hops", p.hops, "Hop bound K of domain and energy")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--delta", p.delta, "Kernel width")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--lambda-a", p.lambda_a, "Structure energy weight")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--lambda-x", p.lambda_x, "Feature energy weight")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_flag("--literal-cosine", p.literal_cosine,
                "Cosine similarity inside the kernel");
  cmd->add_flag("--normalize-feature-energy", p.normalize_feature_energy,
                "Average instead of sum the feature energy");
  cmd->add_option("--l1", cfg.fit.l1, "Surrogate L1 strength")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--fit-epochs", cfg.fit.epochs, "Surrogate epochs")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--fit-lr", cfg.fit.learning_rate, "Surrogate step size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--fit-lr-growth", cfg.fit.lr_growth,
                  "Step size factor after an accepted surrogate step")
      ->check(CLI::Range(1.0, 1e9))
      ->capture_default_str();
  cmd->add_option("--weight-mode", f.weight_mode, "Instance weight 1/gamma or gamma")
      ->check(CLI::IsMember({"inverse", "proportional"}))
      ->capture_default_str();
}

void finish_explain_options(ExplainConfig& cfg, const ExplainFlags& f) {
  cfg.perturbation.structure = parse_structure_pattern(f.structure);
  cfg.perturbation.feature = parse_feature_pattern(f.feature);
  cfg.fit.weight_mode = parse_weight_mode(f.weight_mode);
  try {
    cfg.perturbation.validate();
    cfg.fit.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

ExplainConfig explain_defaults(const nlohmann::json& file) {
  ExplainConfig cfg;
  if (file.contains("perturbation")) {
    cfg.perturbation = perturbation_config_from_json(file.at("perturbation"));
  }
  if (file.contains("fit")) cfg.fit = fit_config_from_json(file.at("fit"));
  cfg.n_select = file.value("n_select", cfg.n_select);
  return cfg;
}

// Labels are zero-based, so the class count is the largest label plus one.
int class_count(const std::vector<Graph>& graphs, Task task) {
  int top = -1;
  for (const auto& g : graphs) {
    if (task == Task::kNode) {
      if (!g.node_labels) throw std::runtime_error("graph has no node labels");
      for (int y : *g.node_labels) top = std::max(top, y);
    } else {
      if (!g.graph_label) throw std::runtime_error("graph has no graph label");
      top = std::max(top, *g.graph_label);
    }
  }
  return top + 1;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"trap2: perturbation-based explanations for graph classifiers"};
  app.require_subcommand(1);

  const std::string config_path = find_config(argc, argv);
  nlohmann::json file = nlohmann::json::object();
  if (!config_path.empty()) {
    try {
      file = read_json(config_path);
    } catch (const UsageError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    }
  }

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic benchmark graph");
  DatasetSpec spec;
  std::string dataset_name = "ba-shapes";
  std::string gen_out;
  try {
    if (file.contains("dataset")) spec = dataset_spec_from_json(file.at("dataset"));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  dataset_name = std::string(to_string(spec.kind));
  gen->add_option("--config", "JSON file with default values");
  gen->add_option("--dataset", dataset_name, "Benchmark kind")
      ->check(CLI::IsMember({"ba-shapes", "ba-community", "tree-cycle",
                             "tree-grid"}))
      ->capture_default_str();
  gen->add_option("--seed", spec.seed, "Generator seed")->capture_default_str();
  gen->add_option("--base-nodes", spec.base_nodes, "BA base size")
      ->capture_default_str();
  gen->add_option("--tree-depth", spec.tree_depth, "Binary tree depth")
      ->capture_default_str();
  gen->add_option("--motifs", spec.motif_count, "Motif instances")
      ->capture_default_str();
  gen->add_option("--noise", spec.noise_edge_fraction,
                  "Random edges as a fraction of nodes")
      ->capture_default_str();
  gen->add_option("--feature-dim", spec.feature_dim, "Feature width")
      ->capture_default_str();
  gen->add_option("--ba-edges", spec.ba_edges_per_node,
                  "Edges per new BA node")
      ->capture_default_str();
  gen->add_option("-o,--output", gen_out, "Output graph JSON")->required();

  // train
  auto* tr = app.add_subcommand("train", "Train the reference classifier");
  GcnConfig gcfg;
  TrainConfig tcfg;
  std::string train_graph, train_out, task_name = "node", optimizer = "adam",
                                      aggregation = "sum";
  bool black_box = false;
  tr->add_option("--config", "JSON file with default values");
  tr->add_option("-g,--graph,--dataset", train_graph, "Graph JSON")->required();
  tr->add_option("--task", task_name, "node or graph")
      ->check(CLI::IsMember({"node", "graph"}))
      ->capture_default_str();
  tr->add_option("--epochs", tcfg.epochs, "Training epochs")->capture_default_str();
  tr->add_option("--lr", tcfg.learning_rate, "Step size")->capture_default_str();
  tr->add_option("--weight-decay", tcfg.weight_decay, "L2 weight decay")
      ->capture_default_str();
  tr->add_option("--split", tcfg.train_fraction, "Train fraction")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  tr->add_option("--seed", tcfg.seed, "Init and split seed")->capture_default_str();
  tr->add_option("--optimizer", optimizer, "adam or gd")
      ->check(CLI::IsMember({"adam", "gd"}))
      ->capture_default_str();
  tr->add_option("--aggregation", aggregation, "sum or symmetric")
      ->check(CLI::IsMember({"sum", "symmetric"}))
      ->capture_default_str();
  tr->add_option("--hidden", gcfg.hidden, "Hidden width")->capture_default_str();
  tr->add_option("--depth", gcfg.depth, "Message-passing layers")
      ->capture_default_str();
  tr->add_flag("--black-box", black_box, "Mark the model as gradient-free");
  tr->add_option("-o,--output", train_out, "Output model JSON")->required();

  // explain
  auto* ex = app.add_subcommand("explain", "Explain one prediction");
  ExplainConfig ecfg;
  ExplainFlags eflags;
  try {
    ecfg = explain_defaults(file);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  std::string ex_graph, ex_model, ex_out, ex_dot, ex_method = "trap2";
  int ex_node = -1;
  int ex_index = 0;
  std::uint64_t ex_seed = file.value("seed", std::uint64_t{0});
  bool greedy_remove = false, grad_adjacency = false;
  ex->add_option("--config", "JSON file with default values");
  ex->add_option("-g,--graph,--dataset", ex_graph, "Graph JSON")->required();
  ex->add_option("--model", ex_model, "Model JSON")->required();
  ex->add_option("--node", ex_node, "Node to explain (node tasks)");
  ex->add_option("--index", ex_index, "Graph in a multi-graph file")
      ->capture_default_str();
  ex->add_option("--method", ex_method, "Explainer")
      ->check(CLI::IsMember({"trap2", "random", "greedy", "grad"}))
      ->capture_default_str();
  ex->add_option("--seed", ex_seed, "Explainer seed")->capture_default_str();
  ex->add_option("--n-select", ecfg.n_select,
                 "Nodes to keep; 0 keeps a quarter of the domain")
      ->capture_default_str();
  ex->add_option("--workers", ecfg.workers, "Threads")->capture_default_str();
  ex->add_flag("--greedy-remove-node", greedy_remove,
               "Greedy drops nodes instead of cutting their edges");
  ex->add_flag("--grad-adjacency", grad_adjacency,
               "Grad scores nodes from adjacency gradients");
  ex->add_option("-o,--output", ex_out, "Explanation JSON (stdout if absent)");
  ex->add_option("--export-dot", ex_dot, "Also write a DOT rendering");
  add_explain_options(ex, ecfg, eflags);

  // eval
  auto* ev = app.add_subcommand("eval", "Score explainers against motifs");
  EvalConfig vcfg;
  ExplainFlags vflags;
  vcfg.explain = ecfg;
  vcfg.seed = file.value("seed", vcfg.seed);
  vcfg.sample = file.value("sample", vcfg.sample);
  if (file.contains("methods")) {
    vcfg.methods = file.at("methods").get<std::vector<std::string>>();
  }
  std::string ev_graph, ev_model, ev_csv, ev_json, ev_name;
  ev->add_option("--config", "JSON file with default values");
  ev->add_option("-g,--graph,--dataset", ev_graph, "Graph JSON")->required();
  ev->add_option("--model", ev_model, "Model JSON")->required();
  ev->add_option("--methods,--method", vcfg.methods, "Explainers to compare")
      ->delimiter(',')
      ->check(CLI::IsMember({"trap2", "random", "greedy", "grad"}))
      ->capture_default_str();
  ev->add_option("--sample", vcfg.sample, "Motif nodes to sample; 0 = all")
      ->capture_default_str();
  ev->add_option("--seed", vcfg.seed, "Explainer seed")->capture_default_str();
  ev->add_option("--workers", vcfg.workers, "Threads")->capture_default_str();
  ev->add_option("--name", ev_name, "Dataset name in the report");
  ev->add_flag("--greedy-remove-node", vcfg.greedy.remove_node,
               "Greedy drops nodes instead of cutting their edges");
  ev->add_flag("--grad-adjacency", vcfg.grad.use_adjacency,
               "Grad scores nodes from adjacency gradients");
  ev->add_option("--csv", ev_csv, "CSV report (stdout if no output given)");
  ev->add_option("--json", ev_json, "JSON report");
  add_explain_options(ev, vcfg.explain, vflags);

  // export-dot
  auto* dot = app.add_subcommand("export-dot", "Render an explanation as DOT");
  std::string dot_expl, dot_graph, dot_out;
  dot->add_option("--explanation", dot_expl, "Explanation JSON")->required();
  dot->add_option("-g,--graph,--dataset", dot_graph, "Graph JSON")->required();
  dot->add_option("-o,--output", dot_out, "DOT file (stdout if absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) {
      spec.kind = parse_dataset_kind(dataset_name);
      try {
        spec.validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const Graph g = generate(spec);
      save_graph(g, gen_out);
      std::cout << "wrote " << gen_out << ": " << g.num_nodes() << " nodes, "
                << edge_count(g.adjacency) << " edges\n";
    } else if (*tr) {
      require_file(train_graph, "graph");
      const Task task = parse_task(task_name);
      std::vector<Graph> graphs = task == Task::kNode
                                      ? std::vector<Graph>{load_graph(train_graph)}
                                      : load_graphs(train_graph);
      if (graphs.empty()) throw std::runtime_error("no graphs in " + train_graph);
      gcfg.task = task;
      gcfg.input_dim = graphs.front().feature_dim();
      gcfg.num_classes = class_count(graphs, task);
      gcfg.aggregation =
          aggregation == "sum" ? Aggregation::kSum : Aggregation::kSymmetric;
      tcfg.optimizer =
          optimizer == "adam" ? Optimizer::kAdam : Optimizer::kGradientDescent;
      auto model = ReferenceGcn::initialize(gcfg, tcfg.seed);
      const TrainReport rep =
          task == Task::kNode ? train(model, graphs.front(), tcfg)
                              : train(model, std::span<const Graph>(graphs), tcfg);
      save_model(model, train_out, black_box);
      const nlohmann::json summary = {{"train_accuracy", rep.train_accuracy},
                                      {"test_accuracy", rep.test_accuracy},
                                      {"final_loss", rep.final_loss},
                                      {"epochs", rep.epochs}};
      std::cout << summary.dump() << '\n';
    } else if (*ex) {
      require_file(ex_graph, "graph");
      require_file(ex_model, "model");
      finish_explain_options(ecfg, eflags);
      ecfg.perturbation.seed = ex_seed;
      const auto predictor = load_predictor(ex_model);
      Explanation e;
      Adjacency domain_adj;
      if (predictor->task() == Task::kGraph) {
        const auto graphs = load_graphs(ex_graph);
        if (ex_index < 0 || ex_index >= static_cast<int>(graphs.size())) {
          throw UsageError("--index out of range");
        }
        const Graph& g = graphs[static_cast<size_t>(ex_index)];
        if (ex_method != "trap2") {
          throw UsageError("graph tasks are explained with --method trap2");
        }
        e = explain_graph(g, *predictor, ecfg);
        domain_adj = g.adjacency;
      } else {
        if (ex_node < 0) throw UsageError("--node is required for node tasks");
        const Graph g = load_graph(ex_graph);
        if (ex_node >= g.num_nodes()) throw UsageError("--node out of range");
        const auto dom = translate(g, ex_node, ecfg.perturbation.hops);
        const int k = ecfg.n_select > 0 ? std::min(ecfg.n_select, dom.size())
                                        : default_selection(dom.size());
        if (ex_method == "trap2") {
          ecfg.n_select = k;
          e = explain_node(g, ex_node, *predictor, ecfg);
        } else if (ex_method == "random") {
          e = random_explainer(dom, ex_seed, k);
        } else if (ex_method == "greedy") {
          e = greedy_explainer(dom, *predictor, k, GreedyOptions{greedy_remove});
        } else {
          const int target =
              argmax(predictor->response(dom.adjacency, dom.features, 0));
          e = grad_explainer(dom, *predictor, target, k,
                             GradOptions{grad_adjacency});
        }
        domain_adj = dom.adjacency;
      }
      write_text(ex_out, to_json(e).dump(2) + "\n");
      if (!ex_dot.empty()) write_text(ex_dot, to_dot(e, domain_adj));
    } else if (*ev) {
      require_file(ev_graph, "graph");
      require_file(ev_model, "model");
      finish_explain_options(vcfg.explain, vflags);
      vcfg.dataset = ev_name.empty() ? fs::path(ev_graph).stem().string() : ev_name;
      const Graph g = load_graph(ev_graph);
      const auto predictor = load_predictor(ev_model);
      const EvalReport report = evaluate(g, *predictor, vcfg);
      write_report(report, ev_csv, ev_json);
      if (ev_csv.empty()) std::cout << report.csv();
    } else if (*dot) {
      require_file(dot_expl, "explanation");
      require_file(dot_graph, "graph");
      const Explanation e = load_explanation(dot_expl);
      write_text(dot_out, to_dot(e, load_graph(dot_graph)));
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace trap2
