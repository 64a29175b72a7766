// SPDX-License-Identifier: Apache-2.0
#include "appgnn/graph.hpp"

#include <algorithm>
#include <set>

#include "appgnn/error.hpp"

namespace appgnn {

std::vector<int> CircuitGraph::pi_nodes() const {
  std::vector<int> out;
  for (int v = 0; v < n(); ++v) {
    if (nodes[static_cast<size_t>(v)].is_pi) out.push_back(v);
  }
  return out;
}

std::vector<int> CircuitGraph::po_nodes() const {
  std::vector<int> out;
  for (int v = 0; v < n(); ++v) {
    if (nodes[static_cast<size_t>(v)].is_po) out.push_back(v);
  }
  return out;
}

int CircuitGraph::stored_po_count() const {
  int c = 0;
  for (const GraphNode& node : nodes) c += node.is_po ? 1 : 0;
  return c;
}

std::vector<int> two_hop_histogram(const CircuitGraph& g, int v) {
  std::vector<int> hist(static_cast<size_t>(g.lib->size()), 0);
  std::set<int> seen{v};
  std::vector<int> frontier{v};
  for (int hop = 0; hop < 2; ++hop) {
    std::vector<int> next;
    for (int u : frontier) {
      for (const auto* adj : {&g.out_adj[static_cast<size_t>(u)], &g.in_adj[static_cast<size_t>(u)]}) {
        for (int w : *adj) {
          if (seen.insert(w).second) {
            ++hist[static_cast<size_t>(g.nodes[static_cast<size_t>(w)].cell)];
            next.push_back(w);
          }
        }
      }
    }
    frontier = std::move(next);
  }
  return hist;
}

CircuitGraph build_graph(const Netlist& netlist) {
  CircuitGraph g;
  g.name = netlist.name;
  g.lib = netlist.lib;
  const int n = static_cast<int>(netlist.gates.size());
  g.nodes.resize(static_cast<size_t>(n));
  g.out_adj.assign(static_cast<size_t>(n), {});
  g.in_adj.assign(static_cast<size_t>(n), {});

  std::vector<int> driver(netlist.nets.size(), -1);
  std::vector<int> net_sink_pins(netlist.nets.size(), 0);
  std::vector<uint8_t> net_is_pi(netlist.nets.size(), 0), net_is_po(netlist.nets.size(), 0);
  for (int id : netlist.primary_inputs) net_is_pi[static_cast<size_t>(id)] = 1;
  for (int id : netlist.primary_outputs) net_is_po[static_cast<size_t>(id)] = 1;
  for (int v = 0; v < n; ++v) {
    driver[static_cast<size_t>(netlist.gates[static_cast<size_t>(v)].output_net)] = v;
  }

  std::vector<std::set<int>> out_sets(static_cast<size_t>(n)), in_sets(static_cast<size_t>(n));
  for (int v = 0; v < n; ++v) {
    const GateInst& gate = netlist.gates[static_cast<size_t>(v)];
    GraphNode& node = g.nodes[static_cast<size_t>(v)];
    node.name = gate.name;
    node.cell = gate.cell;
    node.label = gate.label;
    node.in_degree = static_cast<int>(gate.input_nets.size());
    for (int net : gate.input_nets) {
      ++net_sink_pins[static_cast<size_t>(net)];
      if (net_is_pi[static_cast<size_t>(net)]) node.is_pi = 1;
      const int u = driver[static_cast<size_t>(net)];
      if (u >= 0) {
        out_sets[static_cast<size_t>(u)].insert(v);
        in_sets[static_cast<size_t>(v)].insert(u);
      }
    }
    node.is_po = net_is_po[static_cast<size_t>(gate.output_net)];
  }
  for (int v = 0; v < n; ++v) {
    g.out_adj[static_cast<size_t>(v)].assign(out_sets[static_cast<size_t>(v)].begin(),
                                             out_sets[static_cast<size_t>(v)].end());
    g.in_adj[static_cast<size_t>(v)].assign(in_sets[static_cast<size_t>(v)].begin(),
                                            in_sets[static_cast<size_t>(v)].end());
  }
  for (int v = 0; v < n; ++v) {
    const GateInst& gate = netlist.gates[static_cast<size_t>(v)];
    GraphNode& node = g.nodes[static_cast<size_t>(v)];
    const auto out_net = static_cast<size_t>(gate.output_net);
    node.out_degree = net_sink_pins[out_net] + (net_is_po[out_net] ? 1 : 0);
    node.two_hop = two_hop_histogram(g, v);
  }
  return g;
}

int feature_dim(const CellLibrary& lib) { return 2 + 2 * lib.size() + 2; }

Eigen::RowVectorXd feature_vector(const CircuitGraph& g, int v) {
  const int L = g.lib->size();
  const GraphNode& node = g.nodes.at(static_cast<size_t>(v));
  Eigen::RowVectorXd x = Eigen::RowVectorXd::Zero(feature_dim(*g.lib));
  x(0) = node.is_pi;
  x(1) = node.is_po;
  x(2 + node.cell) = 1.0;
  for (int c = 0; c < L; ++c) x(2 + L + c) = node.two_hop[static_cast<size_t>(c)];
  x(2 + 2 * L) = node.in_degree;
  x(2 + 2 * L + 1) = node.out_degree;
  return x;
}

Eigen::MatrixXd feature_matrix(const CircuitGraph& g) {
  Eigen::MatrixXd X(g.n(), feature_dim(*g.lib));
  for (int v = 0; v < g.n(); ++v) X.row(v) = feature_vector(g, v);
  return X;
}

CircuitGraph induced_subgraph(const CircuitGraph& g, const std::vector<int>& keep) {
  std::vector<int> remap(static_cast<size_t>(g.n()), -1);
  for (size_t i = 0; i < keep.size(); ++i) {
    const int v = keep[i];
    if (v < 0 || v >= g.n()) throw Error("induced_subgraph: node id out of range");
    if (remap[static_cast<size_t>(v)] != -1) throw Error("induced_subgraph: duplicate node id");
    remap[static_cast<size_t>(v)] = static_cast<int>(i);
  }
  CircuitGraph s;
  s.name = g.name;
  s.lib = g.lib;
  s.meta = g.meta;
  s.nodes.reserve(keep.size());
  s.out_adj.resize(keep.size());
  s.in_adj.resize(keep.size());
  for (int v : keep) s.nodes.push_back(g.nodes[static_cast<size_t>(v)]);
  for (size_t i = 0; i < keep.size(); ++i) {
    for (int w : g.out_adj[static_cast<size_t>(keep[i])]) {
      const int m = remap[static_cast<size_t>(w)];
      if (m != -1) {
        s.out_adj[i].push_back(m);
        s.in_adj[static_cast<size_t>(m)].push_back(static_cast<int>(i));
      }
    }
  }
  for (auto& adj : s.out_adj) std::sort(adj.begin(), adj.end());
  for (auto& adj : s.in_adj) std::sort(adj.begin(), adj.end());
  return s;
}

void recompute_stored_features(CircuitGraph& g) {
  for (int v = 0; v < g.n(); ++v) {
    GraphNode& node = g.nodes[static_cast<size_t>(v)];
    if (node.replacement) continue; // replacement fields are fixed by construction
    node.in_degree = g.structural_in_degree(v);
    node.out_degree = g.structural_out_degree(v) + (node.is_po ? 1 : 0);
    node.two_hop = two_hop_histogram(g, v);
  }
}

CircuitGraph merge_graphs(const std::vector<const CircuitGraph*>& parts) {
  if (parts.empty()) throw Error("merge_graphs: empty input");
  CircuitGraph m;
  m.name = "merged";
  m.lib = parts.front()->lib;
  int offset = 0;
  for (size_t p = 0; p < parts.size(); ++p) {
    const CircuitGraph& g = *parts[p];
    if (g.lib->size() != m.lib->size()) throw Error("merge_graphs: cell libraries differ");
    for (int c = 0; c < m.lib->size(); ++c) {
      if (g.lib->cell(c).name != m.lib->cell(c).name) {
        throw Error("merge_graphs: cell libraries differ at index " + std::to_string(c));
      }
    }
    for (int v = 0; v < g.n(); ++v) {
      GraphNode node = g.nodes[static_cast<size_t>(v)];
      node.name = "g" + std::to_string(p) + "/" + node.name;
      m.nodes.push_back(std::move(node));
    }
    for (int v = 0; v < g.n(); ++v) {
      std::vector<int> out, in;
      for (int w : g.out_adj[static_cast<size_t>(v)]) out.push_back(w + offset);
      for (int w : g.in_adj[static_cast<size_t>(v)]) in.push_back(w + offset);
      m.out_adj.push_back(std::move(out));
      m.in_adj.push_back(std::move(in));
    }
    offset += g.n();
  }
  return m;
}

} // namespace appgnn
