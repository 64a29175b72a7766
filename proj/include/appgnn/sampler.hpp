// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "appgnn/graph.hpp"

namespace appgnn {

enum class SamplingMode { Random, Leaf };

struct SamplingConfig {
  SamplingMode mode = SamplingMode::Random;
  int num_selected = 1; // approximation-level proxy
  uint64_t rng_seed = 0;
  /// When set, survivor feature fields are recomputed from the sampled
  /// structure. Off by default: survivors keep the fields of the original
  /// graph, so the sampled graph looks like a carved-up copy of its source.
  bool recompute_features = false;
};

/// Names of the nodes a sampling step touched.
struct SampleReport {
  std::vector<std::string> selected;
  std::vector<std::string> removed; // selected nodes plus their datapaths
  std::vector<std::string> added;   // leaf replacements
};

/// The datapath of node c: every proper ancestor reachable from c by walking
/// predecessor edges through nodes of structural output degree 1. Each such
/// node's entire fan-out leads back to c, so it computes for c alone. c
/// itself is never included; a visited set makes the traversal linear and
/// safe on cyclic test graphs. Result is ascending.
std::vector<int> find_datapath(const CircuitGraph& g, int c);

/// Nodes with structural output degree 0.
std::vector<int> identify_leaf_nodes(const CircuitGraph& g);

/// Removes, for each selected node, the node itself plus its datapath
/// (selected nodes are always removed, whatever their degree). Features of
/// surviving nodes are copied from the input graph unless
/// `recompute_features` is set.
CircuitGraph sample_graph(const CircuitGraph& g, const std::vector<int>& selected,
                          SampleReport* report = nullptr, bool recompute_features = false);

/// Selects cfg.num_selected distinct nodes uniformly and removes them with
/// their datapaths.
CircuitGraph random_node_sampling(const CircuitGraph& g, const SamplingConfig& cfg,
                                  SampleReport* report = nullptr);

/// Selects cfg.num_selected distinct leaf nodes uniformly, removes them with
/// their datapaths, and inserts one isolated BUF node per removed leaf. The
/// replacement stores is_pi=1, is_po=1 and degree fields 1/1 (it stands for a
/// wire passed straight from an input to an output) and inherits the removed
/// leaf's label, so the stored leaf census of the graph is preserved.
CircuitGraph leaf_node_sampling(const CircuitGraph& g, const SamplingConfig& cfg,
                                SampleReport* report = nullptr);

} // namespace appgnn
