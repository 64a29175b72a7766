// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "appgnn/dataset.hpp"
#include "appgnn/gat.hpp"
#include "appgnn/rng.hpp"
#include "appgnn/standardize.hpp"

namespace appgnn {

struct TrainConfig {
  int epochs = 100;
  int roots = 3000; // capped at the merged training graph size
  int walk_depth = 2;
  int batches_per_epoch = 1;
  double lr = 0.01;
  double dropout = 0.1;
  int hidden_dim = 256;
  int heads = 8;
  uint64_t seed = 0;
  bool single_thread = true;
};

struct EpochStat {
  int epoch = 0;
  double loss = 0;
  double val_accuracy = 0;
};

struct TrainResult {
  GatModel model;
  StandardizerStats stats;
  std::vector<EpochStat> history;
  int best_epoch = -1; // earliest epoch attaining the best validation accuracy
};

/// Random-walk subgraph sampling: `roots` start nodes drawn uniformly with
/// replacement, each walked `depth` undirected steps (stopping early at
/// isolated nodes); returns the ascending union of visited nodes. The
/// training loss is computed on these nodes only.
std::vector<int> saint_random_walk_nodes(const AttentionGraph& g, int roots, int depth, Rng& rng);

/// The node-induced subgraph on the visited union.
CircuitGraph saint_random_walk_sample(const CircuitGraph& g, int roots, int depth, Rng& rng);

/// Trains on the dataset's train split (merged into one disjoint-union graph
/// so root sampling spans all circuits) and restores the parameters of the
/// best validation epoch. Throws on divergence (non-finite loss).
TrainResult train(const Dataset& dataset, const TrainConfig& cfg);

struct GraphScore {
  std::string name;
  int nodes = 0;
  double accuracy = 0;
  double normalized_area = -1;
  std::string family;
};

struct ClassScore {
  double precision = 0;
  double recall = 0;
};

struct EvalReport {
  std::vector<GraphScore> per_graph;
  std::vector<std::vector<long>> confusion; // [true][predicted]
  std::vector<ClassScore> per_class;
  double micro_accuracy = 0; // over all nodes
  double macro_accuracy = 0; // mean of per-graph accuracies
};

/// Node-level evaluation of fully labeled graphs, using the training-split
/// standardizer statistics.
EvalReport evaluate(const GatModel& model, const StandardizerStats& stats,
                    const std::vector<CircuitGraph>& graphs);

} // namespace appgnn
