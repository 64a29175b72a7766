// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "appgnn/graph.hpp"

namespace appgnn {

/// Neighbor structure used by attention: the undirected view of a circuit
/// graph, no self entries (the self-loop is added implicitly during
/// aggregation so isolated nodes attend to themselves).
struct AttentionGraph {
  int n = 0;
  std::vector<std::vector<int>> nbrs;

  static AttentionGraph from_circuit(const CircuitGraph& g);
  static AttentionGraph from_edges(int n, const std::vector<std::pair<int, int>>& directed_edges);
};

/// One attention head: projection W (head_dim x in_dim) and attention vector
/// a (2*head_dim x 1, split into source/destination halves).
struct GatHead {
  Eigen::MatrixXd W;
  Eigen::MatrixXd a;
};

struct GatLayer {
  std::vector<GatHead> heads;

  int in_dim() const { return static_cast<int>(heads.front().W.cols()); }
  int head_dim() const { return static_cast<int>(heads.front().W.rows()); }
  int out_dim() const { return static_cast<int>(heads.size()) * head_dim(); }
};

struct Classifier {
  Eigen::MatrixXd W; // classes x embed_dim
  Eigen::MatrixXd b; // classes x 1
};

struct GatConfig {
  int in_dim = 0;
  int hidden_dim = 256; // layer output width
  int heads = 8;
  int classes = 5;
  double dropout = 0.1;
  double leaky_slope = 0.2;
  /// hidden_dim is the concatenated layer output (head_dim = hidden/heads).
  /// When false, hidden_dim is per head and the concatenated output is
  /// hidden_dim * heads.
  bool hidden_is_total = true;

  int head_dim() const { return hidden_is_total ? hidden_dim / heads : hidden_dim; }
  int layer_out_dim() const { return head_dim() * heads; }
};

/// Two multi-head attention layers plus a dense softmax classifier.
struct GatModel {
  GatConfig cfg;
  GatLayer layer1, layer2;
  Classifier fc;

  std::vector<Eigen::MatrixXd*> params();
  std::vector<const Eigen::MatrixXd*> params() const;
  long param_count() const;
};

GatModel init_model(const GatConfig& cfg, uint64_t seed);

/// Inverted-dropout masks (entries 0 or 1/(1-p)) for the two layer inputs.
struct DropoutMasks {
  Eigen::ArrayXXd input;  // n x in_dim
  Eigen::ArrayXXd hidden; // n x layer1 out
};

struct HeadTrace {
  Eigen::MatrixXd P;             // n x head_dim, projected inputs
  Eigen::VectorXd f_src, f_dst;  // attention logit halves
  std::vector<std::vector<double>> alpha; // per node, aligned with {v} + nbrs[v]
  Eigen::MatrixXd M;             // n x head_dim, pre-activation
};

struct LayerTrace {
  Eigen::MatrixXd input; // post-dropout layer input
  std::vector<HeadTrace> heads;
};

struct ForwardTrace {
  std::optional<DropoutMasks> masks;
  LayerTrace l1, l2;
  Eigen::MatrixXd H1;     // layer1 output (pre layer-2 dropout)
  Eigen::MatrixXd Z;      // final embeddings (layer2 output)
  Eigen::MatrixXd logits; // n x classes
  Eigen::MatrixXd probs;  // n x classes, rows sum to 1
};

struct ForwardOptions {
  bool train_mode = false;
  uint64_t dropout_seed = 0;
  /// Replaying recorded masks makes the forward pass a deterministic function
  /// of the parameters, which finite-difference checks rely on.
  const DropoutMasks* replay_masks = nullptr;
};

/// Attention coefficients of one head for every node: entries aligned with
/// {v} + nbrs[v]. Softmax-normalized over the closed neighborhood, so each
/// node's coefficients sum to 1.
std::vector<std::vector<double>> attention_coefficients(const GatHead& head,
                                                        const AttentionGraph& g,
                                                        const Eigen::MatrixXd& H,
                                                        double leaky_slope = 0.2);

/// One multi-head layer: per head ReLU(sum_u alpha_{u,v} W h_u), heads
/// concatenated feature-wise.
Eigen::MatrixXd gat_layer_forward(const GatLayer& layer, const AttentionGraph& g,
                                  const Eigen::MatrixXd& H, double leaky_slope = 0.2);

/// Full forward pass to class probabilities (rows sum to 1).
Eigen::MatrixXd model_forward(const GatModel& model, const AttentionGraph& g,
                              const Eigen::MatrixXd& X, const ForwardOptions& opts = {},
                              ForwardTrace* trace = nullptr);

/// Mean negative log probability of the true class over the masked nodes.
/// `mask` entries may repeat; the mean is over entries.
double cross_entropy_loss(const Eigen::MatrixXd& probs, const std::vector<int>& labels,
                          const std::vector<int>& mask);

/// Analytic gradients for every parameter, ordered as GatModel::params().
std::vector<Eigen::MatrixXd> backward(const GatModel& model, const AttentionGraph& g,
                                      const ForwardTrace& trace, const std::vector<int>& labels,
                                      const std::vector<int>& mask);

struct AdamConfig {
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  std::vector<Eigen::MatrixXd> m, v;
  long step = 0;

  static AdamState for_model(const GatModel& model);
};

void adam_step(GatModel& model, const std::vector<Eigen::MatrixXd>& grads, AdamState& state,
               const AdamConfig& cfg);

std::vector<int> argmax_rows(const Eigen::MatrixXd& probs);

} // namespace appgnn
