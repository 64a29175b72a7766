// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "appgnn/cell_library.hpp"
#include "appgnn/netlist.hpp"

namespace appgnn {

/// A graph node and its stored feature fields. The fields are snapshotted
/// when the graph is built from a netlist: degree fields count netlist pins
/// (in = input pins, out = sinks of the output net, a primary output counts
/// as one sink), and the two-hop histogram is the gate-type census at
/// undirected distance 1 or 2. Node sampling copies survivor fields verbatim
/// unless feature recomputation is requested, so a sampled graph presents the
/// same per-node features as its source.
struct GraphNode {
  std::string name;
  int cell = -1;
  int label = -1;
  bool replacement = false; // inserted by leaf-node sampling

  uint8_t is_pi = 0;
  uint8_t is_po = 0;
  int in_degree = 0;
  int out_degree = 0;
  std::vector<int> two_hop;

  bool operator==(const GraphNode&) const = default;
};

/// Optional provenance carried through to reports.
struct GraphMeta {
  std::string family; // "exact", "lta", ... (empty when unknown)
  int width = 0;
  int param = 0;              // k for lower-part adders, m for block adders
  double normalized_area = -1; // node_count / exact node_count; <0 = unset
};

/// Directed gate graph: edge u -> v iff u's output net feeds an input pin of
/// v (parallel pin connections collapse to one edge). Node order equals
/// netlist gate order. Adjacency lists are sorted ascending.
struct CircuitGraph {
  std::string name;
  CellLibraryPtr lib;
  std::vector<GraphNode> nodes;
  std::vector<std::vector<int>> out_adj;
  std::vector<std::vector<int>> in_adj;
  GraphMeta meta;

  int n() const { return static_cast<int>(nodes.size()); }
  int structural_out_degree(int v) const { return static_cast<int>(out_adj[static_cast<size_t>(v)].size()); }
  int structural_in_degree(int v) const { return static_cast<int>(in_adj[static_cast<size_t>(v)].size()); }

  std::vector<int> pi_nodes() const;
  std::vector<int> po_nodes() const;
  int stored_po_count() const;
};

CircuitGraph build_graph(const Netlist& netlist);

/// Census of gate types among nodes at undirected distance 1 or 2 from v,
/// excluding v itself. Computed from the current structure (build_graph
/// snapshots this into the node's stored fields).
std::vector<int> two_hop_histogram(const CircuitGraph& g, int v);

/// Feature layout: [is_pi, is_po] ++ one-hot(cell) ++ two-hop census ++
/// [in_degree, out_degree].
int feature_dim(const CellLibrary& lib);
Eigen::RowVectorXd feature_vector(const CircuitGraph& g, int v);
Eigen::MatrixXd feature_matrix(const CircuitGraph& g);

/// Makes an edge-consistent subgraph on `keep` (ascending node ids). Stored
/// feature fields are copied from the source; structure is re-derived.
CircuitGraph induced_subgraph(const CircuitGraph& g, const std::vector<int>& keep);

/// Recomputes stored feature fields of non-replacement nodes from the current
/// structure (structural degrees, fresh two-hop census). Port flags are kept.
void recompute_stored_features(CircuitGraph& g);

/// Disjoint union; node names get a per-part prefix to stay unique.
CircuitGraph merge_graphs(const std::vector<const CircuitGraph*>& parts);

} // namespace appgnn
