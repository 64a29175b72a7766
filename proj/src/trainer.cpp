// SPDX-License-Identifier: Apache-2.0
#include "appgnn/trainer.hpp"

#include <algorithm>
#include <cmath>

#include "appgnn/error.hpp"

namespace appgnn {

std::vector<int> saint_random_walk_nodes(const AttentionGraph& g, int roots, int depth, Rng& rng) {
  if (g.n <= 0) throw Error("saint sampler: empty graph");
  std::vector<uint8_t> visited(static_cast<size_t>(g.n), 0);
  for (int r = 0; r < roots; ++r) {
    int cur = static_cast<int>(rng.below(static_cast<uint64_t>(g.n)));
    visited[static_cast<size_t>(cur)] = 1;
    for (int step = 0; step < depth; ++step) {
      const auto& nb = g.nbrs[static_cast<size_t>(cur)];
      if (nb.empty()) break;
      cur = nb[rng.below(nb.size())];
      visited[static_cast<size_t>(cur)] = 1;
    }
  }
  std::vector<int> nodes;
  for (int v = 0; v < g.n; ++v) {
    if (visited[static_cast<size_t>(v)]) nodes.push_back(v);
  }
  return nodes;
}

CircuitGraph saint_random_walk_sample(const CircuitGraph& g, int roots, int depth, Rng& rng) {
  const AttentionGraph ag = AttentionGraph::from_circuit(g);
  return induced_subgraph(g, saint_random_walk_nodes(ag, roots, depth, rng));
}

namespace {

std::vector<int> graph_labels(const CircuitGraph& g) {
  std::vector<int> labels(static_cast<size_t>(g.n()));
  for (int v = 0; v < g.n(); ++v) labels[static_cast<size_t>(v)] = g.nodes[static_cast<size_t>(v)].label;
  return labels;
}

double node_accuracy(const GatModel& model, const StandardizerStats& stats,
                     const CircuitGraph& g, std::vector<int>* pred_out = nullptr) {
  const AttentionGraph ag = AttentionGraph::from_circuit(g);
  const Eigen::MatrixXd X = apply_standardizer(stats, feature_matrix(g));
  const Eigen::MatrixXd probs = model_forward(model, ag, X);
  const std::vector<int> pred = argmax_rows(probs);
  long correct = 0;
  for (int v = 0; v < g.n(); ++v) {
    if (pred[static_cast<size_t>(v)] == g.nodes[static_cast<size_t>(v)].label) ++correct;
  }
  if (pred_out) *pred_out = pred;
  return g.n() == 0 ? 0.0 : static_cast<double>(correct) / g.n();
}

} // namespace

TrainResult train(const Dataset& dataset, const TrainConfig& cfg) {
  const auto train_parts = dataset.split_graphs(0);
  const auto val_parts = dataset.split_graphs(1);
  if (train_parts.empty()) throw Error("train: empty training split");

  // Standardizer statistics come from the training split only.
  std::vector<Eigen::MatrixXd> train_mats;
  train_mats.reserve(train_parts.size());
  for (const CircuitGraph* g : train_parts) train_mats.push_back(feature_matrix(*g));
  const StandardizerStats stats = fit_standardizer(train_mats);

  // All training circuits merge into one disjoint-union graph so that root
  // sampling spans every circuit.
  const CircuitGraph merged = merge_graphs(train_parts);
  const AttentionGraph mg = AttentionGraph::from_circuit(merged);
  const Eigen::MatrixXd X = apply_standardizer(stats, feature_matrix(merged));
  const std::vector<int> labels = graph_labels(merged);
  for (int v = 0; v < merged.n(); ++v) {
    if (labels[static_cast<size_t>(v)] < 0) {
      throw Error("train: unlabeled node '" + merged.nodes[static_cast<size_t>(v)].name + "'");
    }
  }

  GatConfig mc;
  mc.in_dim = static_cast<int>(X.cols());
  mc.hidden_dim = cfg.hidden_dim;
  mc.heads = cfg.heads;
  mc.classes = static_cast<int>(dataset.class_names.size());
  mc.dropout = cfg.dropout;

  TrainResult result;
  result.model = init_model(mc, derive_seed(cfg.seed, "init"));
  result.stats = stats;
  if (cfg.epochs == 0) return result;

  AdamState adam = AdamState::for_model(result.model);
  AdamConfig adam_cfg;
  adam_cfg.lr = cfg.lr;

  const int roots = std::min(cfg.roots, merged.n());
  std::vector<Eigen::MatrixXd> best_params;
  double best_val = -1;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double loss = 0;
    for (int batch = 0; batch < cfg.batches_per_epoch; ++batch) {
      Rng walk_rng(derive_seed(cfg.seed, "saint", static_cast<uint64_t>(epoch) * 1000003ull +
                                                      static_cast<uint64_t>(batch)));
      const std::vector<int> nodes = saint_random_walk_nodes(mg, roots, cfg.walk_depth, walk_rng);
      const CircuitGraph sub = induced_subgraph(merged, nodes);
      const AttentionGraph sag = AttentionGraph::from_circuit(sub);

      Eigen::MatrixXd Xs(nodes.size(), X.cols());
      std::vector<int> ls(nodes.size());
      for (size_t i = 0; i < nodes.size(); ++i) {
        Xs.row(static_cast<long>(i)) = X.row(nodes[i]);
        ls[i] = labels[static_cast<size_t>(nodes[i])];
      }
      std::vector<int> mask(nodes.size());
      for (size_t i = 0; i < nodes.size(); ++i) mask[i] = static_cast<int>(i);

      ForwardOptions opts;
      opts.train_mode = true;
      opts.dropout_seed = derive_seed(cfg.seed, "dropout", static_cast<uint64_t>(epoch) * 1000003ull +
                                                               static_cast<uint64_t>(batch));
      ForwardTrace trace;
      const Eigen::MatrixXd probs = model_forward(result.model, sag, Xs, opts, &trace);
      loss = cross_entropy_loss(probs, ls, mask);
      if (!std::isfinite(loss)) {
        throw Error("train: loss diverged (non-finite) at epoch " + std::to_string(epoch));
      }
      const auto grads = backward(result.model, sag, trace, ls, mask);
      adam_step(result.model, grads, adam, adam_cfg);
    }

    double val_acc = 0;
    if (!val_parts.empty()) {
      long correct = 0, total = 0;
      for (const CircuitGraph* g : val_parts) {
        std::vector<int> pred;
        node_accuracy(result.model, stats, *g, &pred);
        for (int v = 0; v < g->n(); ++v) {
          if (pred[static_cast<size_t>(v)] == g->nodes[static_cast<size_t>(v)].label) ++correct;
        }
        total += g->n();
      }
      val_acc = total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
    }
    result.history.push_back({epoch, loss, val_acc});

    // No validation split disables model selection: the final epoch wins.
    if (!val_parts.empty() && val_acc > best_val) {
      best_val = val_acc;
      result.best_epoch = epoch;
      best_params.clear();
      for (const auto* p : result.model.params()) best_params.push_back(*p);
    }
  }

  // Restore the parameters of the best validation epoch (earliest on ties).
  if (!best_params.empty()) {
    auto params = result.model.params();
    for (size_t i = 0; i < params.size(); ++i) *params[i] = best_params[i];
  } else {
    result.best_epoch = cfg.epochs - 1;
  }
  return result;
}

EvalReport evaluate(const GatModel& model, const StandardizerStats& stats,
                    const std::vector<CircuitGraph>& graphs) {
  EvalReport report;
  const int C = model.cfg.classes;
  report.confusion.assign(static_cast<size_t>(C), std::vector<long>(static_cast<size_t>(C), 0));

  long correct = 0, total = 0;
  double acc_sum = 0;
  for (const CircuitGraph& g : graphs) {
    for (const GraphNode& node : g.nodes) {
      if (node.label < 0) throw Error("evaluate: unlabeled node '" + node.name + "' in " + g.name);
      if (node.label >= C) throw Error("evaluate: label out of range in " + g.name);
    }
    std::vector<int> pred;
    const double acc = node_accuracy(model, stats, g, &pred);
    for (int v = 0; v < g.n(); ++v) {
      const int t = g.nodes[static_cast<size_t>(v)].label;
      const int p = pred[static_cast<size_t>(v)];
      ++report.confusion[static_cast<size_t>(t)][static_cast<size_t>(p)];
      if (t == p) ++correct;
    }
    total += g.n();
    acc_sum += acc;
    report.per_graph.push_back(
        {g.name, g.n(), acc, g.meta.normalized_area, g.meta.family});
  }
  report.micro_accuracy = total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
  report.macro_accuracy = graphs.empty() ? 0.0 : acc_sum / static_cast<double>(graphs.size());

  report.per_class.resize(static_cast<size_t>(C));
  for (int c = 0; c < C; ++c) {
    long tp = report.confusion[static_cast<size_t>(c)][static_cast<size_t>(c)];
    long row = 0, col = 0;
    for (int j = 0; j < C; ++j) {
      row += report.confusion[static_cast<size_t>(c)][static_cast<size_t>(j)];
      col += report.confusion[static_cast<size_t>(j)][static_cast<size_t>(c)];
    }
    report.per_class[static_cast<size_t>(c)].recall = row ? static_cast<double>(tp) / row : 0.0;
    report.per_class[static_cast<size_t>(c)].precision = col ? static_cast<double>(tp) / col : 0.0;
  }
  return report;
}

} // namespace appgnn
