// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: convert netlists to graphs, sample graphs, generate
// adder/distractor fixtures, train and evaluate the node classifier, and
// aggregate evaluation reports.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "appgnn/dataset.hpp"
#include "appgnn/error.hpp"
#include "appgnn/json_io.hpp"
#include "appgnn/netlist.hpp"
#include "appgnn/rng.hpp"
#include "appgnn/sampler.hpp"
#include "appgnn/trainer.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace appgnn;

namespace {

uint64_t default_seed() {
  if (const char* env = std::getenv("APPGNN_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 0;
}

CellLibraryPtr load_library(const std::string& path) {
  if (path.empty()) return default_library();
  return std::make_shared<const CellLibrary>(parse_cell_library(read_file(path)));
}

std::map<std::string, int> load_class_map(const std::string& path) {
  std::map<std::string, int> m;
  if (path.empty()) {
    const auto& names = default_class_names();
    for (size_t i = 0; i < names.size(); ++i) m[names[i]] = static_cast<int>(i);
    return m;
  }
  const json j = json::parse(read_file(path));
  for (const auto& [name, id] : j.items()) {
    m[name] = id.get<int>();
  }
  return m;
}

std::vector<std::string> class_names_from_map(const std::map<std::string, int>& m) {
  int maxid = -1;
  for (const auto& [_, id] : m) maxid = std::max(maxid, id);
  std::vector<std::string> names(static_cast<size_t>(maxid + 1));
  for (const auto& [name, id] : m) names[static_cast<size_t>(id)] = name;
  return names;
}

/// Graph JSON embeds its library; rebuild it so graphs are self-contained.
CellLibraryPtr library_from_graph_json(const std::string& text) {
  const json j = json::parse(text);
  if (!j.contains("library")) return default_library();
  std::string lib_text;
  for (const auto& c : j.at("library")) {
    lib_text += c.at("name").get<std::string>() + " " +
                std::to_string(c.at("inputs").get<int>()) + "\n";
  }
  return std::make_shared<const CellLibrary>(parse_cell_library(lib_text));
}

SamplingMode parse_mode(const std::string& mode) {
  if (mode == "random") return SamplingMode::Random;
  if (mode == "leaf") return SamplingMode::Leaf;
  throw Error("unknown sampling mode '" + mode + "' (expected random or leaf)");
}

int cmd_convert(const std::vector<std::string>& files, const std::string& lib_path,
                const std::string& labels_path, const std::string& classes_path,
                const std::string& out_dir) {
  const CellLibraryPtr lib = load_library(lib_path);
  LabelConfig labels;
  labels.class_map = load_class_map(classes_path);
  if (!labels_path.empty()) {
    const json sidecar = json::parse(read_file(labels_path));
    for (const auto& [inst, cls] : sidecar.items()) {
      labels.sidecar[inst] = cls.get<std::string>();
    }
  }
  fs::create_directories(out_dir);
  json manifest = json::array();
  for (const std::string& file : files) {
    const Netlist n = parse_netlist(read_file(file), lib, &labels);
    const CircuitGraph g = build_graph(n);
    const std::string out = (fs::path(out_dir) / (fs::path(file).stem().string() + ".graph.json"))
                                .string();
    write_file(out, graph_to_json(g));
    manifest.push_back(json{{"source", file}, {"graph", out}, {"nodes", g.n()}});
    std::cout << file << " -> " << out << " (" << g.n() << " nodes)\n";
  }
  write_file((fs::path(out_dir) / "manifest.json").string(), manifest.dump(1));
  return 0;
}

int cmd_sample(const std::string& graph_file, const std::string& mode, int n, uint64_t seed,
               bool recompute, const std::string& out_file, const std::string& report_file) {
  const std::string text = read_file(graph_file);
  const CircuitGraph g = graph_from_json(text, library_from_graph_json(text));
  SamplingConfig cfg;
  cfg.mode = parse_mode(mode);
  cfg.num_selected = n;
  cfg.rng_seed = derive_seed(seed, "sample");
  cfg.recompute_features = recompute;
  SampleReport report;
  const CircuitGraph s = cfg.mode == SamplingMode::Leaf ? leaf_node_sampling(g, cfg, &report)
                                                        : random_node_sampling(g, cfg, &report);
  write_file(out_file, graph_to_json(s));
  if (!report_file.empty()) write_file(report_file, report_to_json(report));
  std::cout << g.name << ": removed " << report.removed.size() << ", added "
            << report.added.size() << " -> " << out_file << "\n";
  return 0;
}

struct GenRequest {
  std::string family;
  int width = 8;
  std::vector<int> params;
  bool no_carry = false;
};

int cmd_gen(const GenRequest& req, const std::string& out_dir) {
  const CellLibraryPtr lib = default_library();
  fs::create_directories(out_dir);

  std::vector<Netlist> netlists;
  std::map<std::string, FixtureFamily> lpa{{"exact", FixtureFamily::Exact},
                                           {"lta", FixtureFamily::Lta},
                                           {"lca", FixtureFamily::Lca},
                                           {"loa", FixtureFamily::Loa},
                                           {"etai", FixtureFamily::EtaI},
                                           {"aca", FixtureFamily::Aca}};
  if (lpa.count(req.family)) {
    FixtureSpec spec;
    spec.family = lpa.at(req.family);
    spec.width = req.width;
    spec.carry_out = !req.no_carry;
    if (spec.family == FixtureFamily::Exact) {
      netlists.push_back(gen_fixture(spec, lib));
    } else {
      if (req.params.empty()) throw Error("gen: family " + req.family + " needs --param");
      for (int p : req.params) {
        spec.param = p;
        netlists.push_back(gen_fixture(spec, lib));
      }
    }
  } else if (req.family == "mul") {
    netlists.push_back(gen_multiplier(req.width, lib));
  } else if (req.family == "sub") {
    netlists.push_back(gen_subtractor(req.width, lib));
  } else if (req.family == "cmp") {
    netlists.push_back(gen_equality_comparator(req.width, lib));
  } else if (req.family == "mux") {
    netlists.push_back(gen_mux(req.width, lib));
  } else {
    throw Error("gen: unknown family '" + req.family + "'");
  }

  const int exact_nodes = static_cast<int>(
      gen_fixture({FixtureFamily::Exact, req.width, 0, !req.no_carry}, lib).gates.size());
  const auto& classes = default_class_names();
  json manifest = json::array();
  for (size_t i = 0; i < netlists.size(); ++i) {
    const Netlist& n = netlists[i];
    const std::string base = (fs::path(out_dir) / n.name).string();
    write_file(base + ".v", serialize_netlist(n));
    json labels;
    for (const GateInst& g : n.gates) labels[g.name] = classes[static_cast<size_t>(g.label)];
    write_file(base + ".labels.json", labels.dump(1));
    const int param = lpa.count(req.family) && req.family != "exact" && !req.params.empty()
                          ? req.params[i]
                          : 0;
    manifest.push_back(json{{"family", req.family},
                            {"width", req.width},
                            {"param", param},
                            {"netlist", base + ".v"},
                            {"node_count", n.gates.size()},
                            {"normalized_area",
                             static_cast<double>(n.gates.size()) / exact_nodes}});
    std::cout << base << ".v (" << n.gates.size() << " gates)\n";
  }
  write_file((fs::path(out_dir) / "manifest.json").string(), manifest.dump(1));
  return 0;
}

std::vector<CircuitGraph> load_graphs(const std::vector<std::string>& files) {
  std::vector<CircuitGraph> graphs;
  for (const std::string& f : files) {
    const std::string text = read_file(f);
    CircuitGraph g = graph_from_json(text, library_from_graph_json(text));
    const std::string stem = fs::path(f).stem().string();
    // Fixture metadata by naming convention: <family>_add<w>_k<p>.
    if (g.meta.family.empty()) {
      const auto us = stem.find('_');
      if (us != std::string::npos) g.meta.family = stem.substr(0, us);
    }
    graphs.push_back(std::move(g));
  }
  return graphs;
}

int cmd_train(const std::vector<std::string>& graph_files, const std::string& splits_arg,
              const std::string& classes_path, TrainConfig cfg, const std::string& out_dir) {
  std::vector<CircuitGraph> graphs = load_graphs(graph_files);
  if (graphs.empty()) throw Error("train: no input graphs");

  std::array<double, 3> fractions{0.65, 0.20, 0.15};
  if (!splits_arg.empty()) {
    if (std::sscanf(splits_arg.c_str(), "%lf,%lf,%lf", &fractions[0], &fractions[1],
                    &fractions[2]) != 3) {
      throw Error("train: --splits expects a,b,c");
    }
  }

  Dataset ds;
  ds.graphs = std::move(graphs);
  ds.class_names = class_names_from_map(load_class_map(classes_path));
  ds.split = make_splits(static_cast<int>(ds.graphs.size()), fractions,
                         derive_seed(cfg.seed, "split"));

  const TrainResult result = train(ds, cfg);

  fs::create_directories(out_dir);
  Checkpoint ckpt;
  ckpt.library_text = default_library_text();
  ckpt.class_names = ds.class_names;
  ckpt.stats = result.stats;
  ckpt.model = result.model;
  write_file((fs::path(out_dir) / "checkpoint.json").string(), checkpoint_to_json(ckpt));
  write_file((fs::path(out_dir) / "history.csv").string(), history_to_csv(result.history));
  write_file((fs::path(out_dir) / "stats.json").string(), stats_to_json(result.stats));
  if (!result.history.empty()) {
    std::cout << "best epoch " << result.best_epoch << ", val acc "
              << result.history[static_cast<size_t>(result.best_epoch)].val_accuracy << "\n";
  }
  return 0;
}

int cmd_eval(const std::string& ckpt_path, const std::vector<std::string>& graph_files,
             const std::string& out_dir) {
  const Checkpoint ckpt = checkpoint_from_json(read_file(ckpt_path));
  const std::vector<CircuitGraph> graphs = load_graphs(graph_files);
  const EvalReport report = evaluate(ckpt.model, ckpt.stats, graphs);
  fs::create_directories(out_dir);
  write_file((fs::path(out_dir) / "report.json").string(),
             eval_report_to_json(report, ckpt.class_names));
  write_file((fs::path(out_dir) / "area_accuracy.csv").string(), area_accuracy_csv(report));
  std::cout << "micro accuracy " << report.micro_accuracy << " over " << graphs.size()
            << " graphs\n";
  return 0;
}

int cmd_report(const std::vector<std::string>& report_files, const std::string& out_dir) {
  // family -> accuracies across runs
  std::map<std::string, std::vector<double>> family_acc;
  std::string area_rows;
  for (const std::string& f : report_files) {
    const json j = json::parse(read_file(f));
    for (const auto& g : j.at("per_graph")) {
      const std::string fam = g.value("family", std::string("unknown"));
      family_acc[fam].push_back(g.at("accuracy").get<double>());
      if (g.contains("normalized_area")) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f\n",
                      g.at("name").get<std::string>().c_str(),
                      g.at("normalized_area").get<double>(), g.at("accuracy").get<double>());
        area_rows += buf;
      }
    }
  }
  std::string table = "family,circuits,mean_accuracy,std_accuracy\n";
  for (const auto& [fam, accs] : family_acc) {
    double mean = 0;
    for (double a : accs) mean += a;
    mean /= static_cast<double>(accs.size());
    double var = 0;
    for (double a : accs) var += (a - mean) * (a - mean);
    var /= static_cast<double>(accs.size());
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s,%zu,%.6f,%.6f\n", fam.c_str(), accs.size(), mean,
                  std::sqrt(var));
    table += buf;
  }
  fs::create_directories(out_dir);
  write_file((fs::path(out_dir) / "family_accuracy.csv").string(), table);
  write_file((fs::path(out_dir) / "area_accuracy.csv").string(),
             "circuit,normalized_area,accuracy\n" + area_rows);
  std::cout << table;
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"gate-level netlist reverse engineering with graph attention networks"};
  app.require_subcommand(1);

  std::string lib_path, labels_path, classes_path, out_dir = ".";
  std::vector<std::string> files;

  auto* convert = app.add_subcommand("convert", "netlists -> graph JSON");
  convert->add_option("files", files, "netlist files")->required();
  convert->add_option("--lib", lib_path, "cell library file (default: built-in)");
  convert->add_option("--labels", labels_path, "label sidecar JSON");
  convert->add_option("--classes", classes_path, "class map JSON");
  convert->add_option("--out", out_dir, "output directory");

  std::string mode = "leaf", graph_file, report_file, out_file = "sampled.graph.json";
  int nsel = 1;
  uint64_t seed = default_seed();
  bool recompute = false, single_thread = false, no_carry = false;

  auto* sample = app.add_subcommand("sample", "node sampling on a graph JSON");
  sample->add_option("graph", graph_file, "graph JSON")->required();
  sample->add_option("--mode", mode, "random|leaf");
  sample->add_option("--n", nsel, "number of selected nodes");
  sample->add_option("--seed", seed, "rng seed (APPGNN_SEED)");
  sample->add_flag("--recompute-features", recompute, "recompute survivor features");
  sample->add_option("--out", out_file, "output graph JSON");
  sample->add_option("--report", report_file, "removal report JSON");

  GenRequest gen_req;
  auto* gen = app.add_subcommand("gen", "generate fixture netlists");
  gen->add_option("--family", gen_req.family, "exact|lta|lca|loa|etai|aca|mul|sub|cmp|mux")
      ->required();
  gen->add_option("--width", gen_req.width, "operand width");
  gen->add_option("--param", gen_req.params, "approximation parameter(s) k or m");
  gen->add_flag("--no-carry", gen_req.no_carry, "omit carry-out (exact family)");
  gen->add_option("--out", out_dir, "output directory");

  TrainConfig tcfg;
  std::string splits_arg, ckpt_path;
  auto* train_cmd = app.add_subcommand("train", "train the node classifier");
  train_cmd->add_option("graphs", files, "graph JSON files")->required();
  train_cmd->add_option("--splits", splits_arg, "train,val,test fractions (default .65,.20,.15)");
  train_cmd->add_option("--classes", classes_path, "class map JSON");
  train_cmd->add_option("--epochs", tcfg.epochs, "training epochs");
  train_cmd->add_option("--roots", tcfg.roots, "random-walk roots per sample");
  train_cmd->add_option("--depth", tcfg.walk_depth, "random-walk depth");
  train_cmd->add_option("--lr", tcfg.lr, "learning rate");
  train_cmd->add_option("--dropout", tcfg.dropout, "dropout rate");
  train_cmd->add_option("--hidden", tcfg.hidden_dim, "layer output width");
  train_cmd->add_option("--heads", tcfg.heads, "attention heads");
  train_cmd->add_option("--seed", tcfg.seed, "rng seed (APPGNN_SEED)");
  train_cmd->add_flag("--single-thread", single_thread,
                      "deterministic single-threaded mode (always on in this build)");
  train_cmd->add_option("--out", out_dir, "output directory");

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint on labeled graphs");
  eval_cmd->add_option("graphs", files, "graph JSON files")->required();
  eval_cmd->add_option("--checkpoint", ckpt_path, "checkpoint JSON")->required();
  eval_cmd->add_option("--out", out_dir, "output directory");

  auto* report_cmd = app.add_subcommand("report", "aggregate eval reports");
  report_cmd->add_option("reports", files, "report.json files")->required();
  report_cmd->add_option("--out", out_dir, "output directory");

  tcfg.seed = default_seed();

  CLI11_PARSE(app, argc, argv);

  try {
    if (convert->parsed()) return cmd_convert(files, lib_path, labels_path, classes_path, out_dir);
    if (sample->parsed())
      return cmd_sample(graph_file, mode, nsel, seed, recompute, out_file, report_file);
    if (gen->parsed()) return cmd_gen(gen_req, out_dir);
    if (train_cmd->parsed()) return cmd_train(files, splits_arg, classes_path, tcfg, out_dir);
    if (eval_cmd->parsed()) return cmd_eval(ckpt_path, files, out_dir);
    if (report_cmd->parsed()) return cmd_report(files, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
