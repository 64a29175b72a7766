// SPDX-License-Identifier: Apache-2.0
#include "appgnn/json_io.hpp"

#include <fstream>
#include <sstream>

#include "appgnn/error.hpp"
#include "json.hpp"

namespace appgnn {

using json = nlohmann::ordered_json;

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows) {
  const auto r = rows.size();
  const auto c = r ? rows.at(0).size() : 0;
  Eigen::MatrixXd m(static_cast<long>(r), static_cast<long>(c));
  for (size_t i = 0; i < r; ++i) {
    const auto& row = rows.at(i);
    if (row.size() != c) throw Error("json: ragged matrix");
    for (size_t j = 0; j < c; ++j) m(static_cast<long>(i), static_cast<long>(j)) = row.at(j);
  }
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Eigen::VectorXd vector_from_json(const json& a) {
  Eigen::VectorXd v(static_cast<long>(a.size()));
  for (size_t i = 0; i < a.size(); ++i) v(static_cast<long>(i)) = a.at(i);
  return v;
}

json layer_to_json(const GatLayer& layer) {
  json heads = json::array();
  for (const GatHead& h : layer.heads) {
    heads.push_back(json{{"W", matrix_to_json(h.W)}, {"a", matrix_to_json(h.a)}});
  }
  return heads;
}

GatLayer layer_from_json(const json& heads) {
  GatLayer layer;
  for (const auto& h : heads) {
    layer.heads.push_back({matrix_from_json(h.at("W")), matrix_from_json(h.at("a"))});
  }
  return layer;
}

} // namespace

std::string graph_to_json(const CircuitGraph& g) {
  json j;
  j["name"] = g.name;
  json lib = json::array();
  for (const CellDef& c : g.lib->cells()) {
    lib.push_back(json{{"name", c.name}, {"inputs", c.num_inputs()}});
  }
  j["library"] = std::move(lib);

  json nodes = json::array();
  for (int v = 0; v < g.n(); ++v) {
    const GraphNode& node = g.nodes[static_cast<size_t>(v)];
    nodes.push_back(json{{"id", v},
                         {"name", node.name},
                         {"cell", g.lib->cell(node.cell).name},
                         {"label", node.label},
                         {"is_pi", static_cast<bool>(node.is_pi)},
                         {"is_po", static_cast<bool>(node.is_po)},
                         {"replacement", node.replacement}});
  }
  j["nodes"] = std::move(nodes);

  json edges = json::array();
  for (int u = 0; u < g.n(); ++u) {
    for (int v : g.out_adj[static_cast<size_t>(u)]) edges.push_back(json::array({u, v}));
  }
  j["edges"] = std::move(edges);

  j["features"] = matrix_to_json(feature_matrix(g));
  if (!g.meta.family.empty()) {
    j["meta"] = json{{"family", g.meta.family},
                     {"width", g.meta.width},
                     {"param", g.meta.param},
                     {"normalized_area", g.meta.normalized_area}};
  }
  return j.dump(1);
}

CircuitGraph graph_from_json(const std::string& text, CellLibraryPtr lib) {
  const json j = json::parse(text);
  CircuitGraph g;
  g.lib = std::move(lib);
  g.name = j.value("name", "");

  if (j.contains("library")) {
    const auto& jl = j.at("library");
    if (static_cast<int>(jl.size()) != g.lib->size()) {
      throw Error("graph json: library size mismatch");
    }
    for (int i = 0; i < g.lib->size(); ++i) {
      if (jl.at(static_cast<size_t>(i)).at("name").get<std::string>() != g.lib->cell(i).name) {
        throw Error("graph json: library order mismatch at cell " + std::to_string(i));
      }
    }
  }

  const int L = g.lib->size();
  const int d = feature_dim(*g.lib);
  const auto& jn = j.at("nodes");
  const auto& jf = j.at("features");
  if (jf.size() != jn.size()) throw Error("graph json: features/nodes size mismatch");

  g.nodes.resize(jn.size());
  g.out_adj.assign(jn.size(), {});
  g.in_adj.assign(jn.size(), {});
  for (size_t i = 0; i < jn.size(); ++i) {
    const auto& node_j = jn.at(i);
    const int id = node_j.at("id").get<int>();
    if (id != static_cast<int>(i)) throw Error("graph json: node ids must be 0..n-1 in order");
    GraphNode& node = g.nodes[i];
    node.name = node_j.value("name", "n" + std::to_string(i));
    node.cell = g.lib->find(node_j.at("cell").get<std::string>());
    if (node.cell < 0) {
      throw Error("graph json: unknown cell '" + node_j.at("cell").get<std::string>() + "'");
    }
    node.label = node_j.value("label", -1);
    node.replacement = node_j.value("replacement", false);

    const auto& row = jf.at(i);
    if (static_cast<int>(row.size()) != d) throw Error("graph json: feature row length mismatch");
    node.is_pi = row.at(0).get<double>() != 0.0;
    node.is_po = row.at(1).get<double>() != 0.0;
    node.two_hop.resize(static_cast<size_t>(L));
    for (int c = 0; c < L; ++c) {
      node.two_hop[static_cast<size_t>(c)] =
          static_cast<int>(row.at(static_cast<size_t>(2 + L + c)).get<double>());
    }
    node.in_degree = static_cast<int>(row.at(static_cast<size_t>(d - 2)).get<double>());
    node.out_degree = static_cast<int>(row.at(static_cast<size_t>(d - 1)).get<double>());
  }

  for (const auto& e : j.at("edges")) {
    const int u = e.at(0).get<int>(), v = e.at(1).get<int>();
    if (u < 0 || v < 0 || u >= g.n() || v >= g.n()) throw Error("graph json: edge out of range");
    g.out_adj[static_cast<size_t>(u)].push_back(v);
    g.in_adj[static_cast<size_t>(v)].push_back(u);
  }
  for (auto& adj : g.out_adj) std::sort(adj.begin(), adj.end());
  for (auto& adj : g.in_adj) std::sort(adj.begin(), adj.end());

  if (j.contains("meta")) {
    const auto& m = j.at("meta");
    g.meta.family = m.value("family", "");
    g.meta.width = m.value("width", 0);
    g.meta.param = m.value("param", 0);
    g.meta.normalized_area = m.value("normalized_area", -1.0);
  }
  return g;
}

std::string stats_to_json(const StandardizerStats& s) {
  json j;
  j["mean"] = vector_to_json(s.mean);
  j["std"] = vector_to_json(s.std);
  return j.dump(1);
}

StandardizerStats stats_from_json(const std::string& text) {
  const json j = json::parse(text);
  StandardizerStats s;
  s.mean = vector_from_json(j.at("mean"));
  s.std = vector_from_json(j.at("std"));
  if (s.mean.size() != s.std.size()) throw Error("stats json: mean/std size mismatch");
  return s;
}

std::string report_to_json(const SampleReport& r) {
  json j;
  j["selected"] = r.selected;
  j["removed"] = r.removed;
  j["added"] = r.added;
  return j.dump(1);
}

std::string checkpoint_to_json(const Checkpoint& c) {
  json j;
  j["format"] = "appgnn-checkpoint";
  j["version"] = 1;
  j["library"] = c.library_text;
  j["classes"] = c.class_names;
  j["standardizer"] = json{{"mean", vector_to_json(c.stats.mean)},
                           {"std", vector_to_json(c.stats.std)}};
  const GatConfig& cfg = c.model.cfg;
  j["config"] = json{{"in_dim", cfg.in_dim},       {"hidden_dim", cfg.hidden_dim},
                     {"heads", cfg.heads},         {"classes", cfg.classes},
                     {"dropout", cfg.dropout},     {"leaky_slope", cfg.leaky_slope},
                     {"hidden_is_total", cfg.hidden_is_total}};
  j["params"] = json{{"layer1", layer_to_json(c.model.layer1)},
                     {"layer2", layer_to_json(c.model.layer2)},
                     {"fc_w", matrix_to_json(c.model.fc.W)},
                     {"fc_b", matrix_to_json(c.model.fc.b)}};
  return j.dump(1);
}

Checkpoint checkpoint_from_json(const std::string& text) {
  const json j = json::parse(text);
  if (j.value("format", "") != "appgnn-checkpoint") {
    throw Error("checkpoint: unrecognized format field");
  }
  Checkpoint c;
  c.library_text = j.at("library").get<std::string>();
  c.class_names = j.at("classes").get<std::vector<std::string>>();
  c.stats.mean = vector_from_json(j.at("standardizer").at("mean"));
  c.stats.std = vector_from_json(j.at("standardizer").at("std"));
  const auto& cfg = j.at("config");
  c.model.cfg.in_dim = cfg.at("in_dim").get<int>();
  c.model.cfg.hidden_dim = cfg.at("hidden_dim").get<int>();
  c.model.cfg.heads = cfg.at("heads").get<int>();
  c.model.cfg.classes = cfg.at("classes").get<int>();
  c.model.cfg.dropout = cfg.at("dropout").get<double>();
  c.model.cfg.leaky_slope = cfg.at("leaky_slope").get<double>();
  c.model.cfg.hidden_is_total = cfg.at("hidden_is_total").get<bool>();
  c.model.layer1 = layer_from_json(j.at("params").at("layer1"));
  c.model.layer2 = layer_from_json(j.at("params").at("layer2"));
  c.model.fc.W = matrix_from_json(j.at("params").at("fc_w"));
  c.model.fc.b = matrix_from_json(j.at("params").at("fc_b"));
  return c;
}

std::string history_to_csv(const std::vector<EpochStat>& history) {
  std::ostringstream out;
  out << "epoch,loss,val_acc\n";
  char buf[96];
  for (const EpochStat& e : history) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", e.epoch, e.loss, e.val_accuracy);
    out << buf;
  }
  return out.str();
}

std::string eval_report_to_json(const EvalReport& r, const std::vector<std::string>& class_names) {
  json j;
  j["micro_accuracy"] = r.micro_accuracy;
  j["macro_accuracy"] = r.macro_accuracy;
  json per_graph = json::array();
  for (const GraphScore& s : r.per_graph) {
    json e{{"name", s.name}, {"nodes", s.nodes}, {"accuracy", s.accuracy}};
    if (!s.family.empty()) e["family"] = s.family;
    if (s.normalized_area >= 0) e["normalized_area"] = s.normalized_area;
    per_graph.push_back(std::move(e));
  }
  j["per_graph"] = std::move(per_graph);
  j["confusion"] = r.confusion;
  json per_class = json::array();
  for (size_t c = 0; c < r.per_class.size(); ++c) {
    per_class.push_back(json{{"class", c < class_names.size() ? class_names[c] : std::to_string(c)},
                             {"precision", r.per_class[c].precision},
                             {"recall", r.per_class[c].recall}});
  }
  j["per_class"] = std::move(per_class);
  return j.dump(1);
}

std::string area_accuracy_csv(const EvalReport& r) {
  std::ostringstream out;
  out << "circuit,normalized_area,accuracy\n";
  char buf[160];
  for (const GraphScore& s : r.per_graph) {
    if (s.normalized_area < 0) continue;
    std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f\n", s.name.c_str(), s.normalized_area,
                  s.accuracy);
    out << buf;
  }
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path);
  out << content;
  if (!out) throw Error("write failed: " + path);
}

} // namespace appgnn
