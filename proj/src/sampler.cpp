// SPDX-License-Identifier: Apache-2.0
#include "appgnn/sampler.hpp"

#include <algorithm>

#include "appgnn/error.hpp"
#include "appgnn/rng.hpp"

namespace appgnn {

std::vector<int> find_datapath(const CircuitGraph& g, int c) {
  if (c < 0 || c >= g.n()) throw Error("find_datapath: node id out of range");
  std::vector<uint8_t> visited(static_cast<size_t>(g.n()), 0);
  visited[static_cast<size_t>(c)] = 1; // the seed is excluded and stops self-cycles
  std::vector<int> result;
  std::vector<int> stack{c};
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int p : g.in_adj[static_cast<size_t>(u)]) {
      if (visited[static_cast<size_t>(p)]) continue;
      if (g.structural_out_degree(p) != 1) continue; // p feeds something else too
      visited[static_cast<size_t>(p)] = 1;
      result.push_back(p);
      stack.push_back(p);
    }
  }
  std::sort(result.begin(), result.end());
  return result;
}

std::vector<int> identify_leaf_nodes(const CircuitGraph& g) {
  std::vector<int> leaves;
  for (int v = 0; v < g.n(); ++v) {
    if (g.structural_out_degree(v) == 0) leaves.push_back(v);
  }
  return leaves;
}

namespace {

std::vector<int> removal_set(const CircuitGraph& g, const std::vector<int>& selected) {
  std::vector<uint8_t> drop(static_cast<size_t>(g.n()), 0);
  for (int s : selected) {
    if (s < 0 || s >= g.n()) throw Error("sample_graph: selected node out of range");
    drop[static_cast<size_t>(s)] = 1;
    for (int v : find_datapath(g, s)) drop[static_cast<size_t>(v)] = 1;
  }
  std::vector<int> removed;
  for (int v = 0; v < g.n(); ++v) {
    if (drop[static_cast<size_t>(v)]) removed.push_back(v);
  }
  return removed;
}

void fill_names(const CircuitGraph& g, const std::vector<int>& ids, std::vector<std::string>& out) {
  for (int v : ids) out.push_back(g.nodes[static_cast<size_t>(v)].name);
}

} // namespace

CircuitGraph sample_graph(const CircuitGraph& g, const std::vector<int>& selected,
                          SampleReport* report, bool recompute_features) {
  if (selected.empty()) throw Error("sample_graph: empty selection");
  const std::vector<int> removed = removal_set(g, selected);
  std::vector<uint8_t> drop(static_cast<size_t>(g.n()), 0);
  for (int v : removed) drop[static_cast<size_t>(v)] = 1;
  std::vector<int> keep;
  for (int v = 0; v < g.n(); ++v) {
    if (!drop[static_cast<size_t>(v)]) keep.push_back(v);
  }
  if (report) {
    fill_names(g, selected, report->selected);
    fill_names(g, removed, report->removed);
  }
  CircuitGraph s = induced_subgraph(g, keep);
  if (recompute_features) recompute_stored_features(s);
  return s;
}

CircuitGraph random_node_sampling(const CircuitGraph& g, const SamplingConfig& cfg,
                                  SampleReport* report) {
  if (cfg.num_selected < 1) throw Error("random_node_sampling: num_selected must be >= 1");
  if (cfg.num_selected > g.n()) {
    throw Error("random_node_sampling: num_selected exceeds node count");
  }
  Rng rng(cfg.rng_seed);
  const std::vector<int> selected = rng.choose_distinct(g.n(), cfg.num_selected);
  return sample_graph(g, selected, report, cfg.recompute_features);
}

CircuitGraph leaf_node_sampling(const CircuitGraph& g, const SamplingConfig& cfg,
                                SampleReport* report) {
  const std::vector<int> leaves = identify_leaf_nodes(g);
  if (leaves.empty()) throw Error("leaf_node_sampling: graph has no leaf nodes");
  if (cfg.num_selected < 1) throw Error("leaf_node_sampling: num_selected must be >= 1");
  if (cfg.num_selected > static_cast<int>(leaves.size())) {
    throw Error("leaf_node_sampling: num_selected exceeds leaf count");
  }
  const int buf = g.lib->buf_index();
  if (buf < 0) throw Error("leaf_node_sampling: cell library has no BUF cell");

  Rng rng(cfg.rng_seed);
  std::vector<int> selected;
  for (int i : rng.choose_distinct(static_cast<int>(leaves.size()), cfg.num_selected)) {
    selected.push_back(leaves[static_cast<size_t>(i)]);
  }
  CircuitGraph s = sample_graph(g, selected, report, cfg.recompute_features);

  for (int leaf : selected) {
    const GraphNode& old = g.nodes[static_cast<size_t>(leaf)];
    GraphNode repl;
    repl.name = "buf_" + old.name;
    repl.cell = buf;
    repl.label = old.label;
    repl.replacement = true;
    repl.is_pi = 1;
    repl.is_po = 1;
    repl.in_degree = 1;
    repl.out_degree = 1;
    repl.two_hop.assign(static_cast<size_t>(g.lib->size()), 0);
    s.nodes.push_back(std::move(repl));
    s.out_adj.emplace_back();
    s.in_adj.emplace_back();
    if (report) report->added.push_back(s.nodes.back().name);
  }
  return s;
}

} // namespace appgnn
