// SPDX-License-Identifier: Apache-2.0
#include "appgnn/gat.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "appgnn/error.hpp"
#include "appgnn/rng.hpp"

namespace appgnn {

AttentionGraph AttentionGraph::from_circuit(const CircuitGraph& g) {
  AttentionGraph ag;
  ag.n = g.n();
  ag.nbrs.resize(static_cast<size_t>(g.n()));
  for (int v = 0; v < g.n(); ++v) {
    std::set<int> s;
    for (int u : g.in_adj[static_cast<size_t>(v)]) s.insert(u);
    for (int u : g.out_adj[static_cast<size_t>(v)]) s.insert(u);
    s.erase(v);
    ag.nbrs[static_cast<size_t>(v)].assign(s.begin(), s.end());
  }
  return ag;
}

AttentionGraph AttentionGraph::from_edges(int n,
                                          const std::vector<std::pair<int, int>>& directed_edges) {
  AttentionGraph ag;
  ag.n = n;
  std::vector<std::set<int>> sets(static_cast<size_t>(n));
  for (auto [u, v] : directed_edges) {
    if (u != v) {
      sets[static_cast<size_t>(u)].insert(v);
      sets[static_cast<size_t>(v)].insert(u);
    }
  }
  ag.nbrs.resize(static_cast<size_t>(n));
  for (int v = 0; v < n; ++v) {
    ag.nbrs[static_cast<size_t>(v)].assign(sets[static_cast<size_t>(v)].begin(),
                                           sets[static_cast<size_t>(v)].end());
  }
  return ag;
}

std::vector<Eigen::MatrixXd*> GatModel::params() {
  std::vector<Eigen::MatrixXd*> out;
  for (GatLayer* layer : {&layer1, &layer2}) {
    for (GatHead& h : layer->heads) {
      out.push_back(&h.W);
      out.push_back(&h.a);
    }
  }
  out.push_back(&fc.W);
  out.push_back(&fc.b);
  return out;
}

std::vector<const Eigen::MatrixXd*> GatModel::params() const {
  std::vector<const Eigen::MatrixXd*> out;
  for (const GatLayer* layer : {&layer1, &layer2}) {
    for (const GatHead& h : layer->heads) {
      out.push_back(&h.W);
      out.push_back(&h.a);
    }
  }
  out.push_back(&fc.W);
  out.push_back(&fc.b);
  return out;
}

long GatModel::param_count() const {
  long c = 0;
  for (const auto* t : params()) c += t->size();
  return c;
}

namespace {

Eigen::MatrixXd glorot(int rows, int cols, Rng& rng) {
  const double limit = std::sqrt(6.0 / (rows + cols));
  Eigen::MatrixXd m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = rng.uniform(-limit, limit);
  }
  return m;
}

GatLayer init_layer(int in_dim, int head_dim, int heads, Rng& rng) {
  GatLayer layer;
  for (int k = 0; k < heads; ++k) {
    GatHead h;
    h.W = glorot(head_dim, in_dim, rng);
    h.a = glorot(2 * head_dim, 1, rng);
    layer.heads.push_back(std::move(h));
  }
  return layer;
}

double leaky_relu(double x, double slope) { return x > 0 ? x : slope * x; }
double leaky_relu_grad(double x, double slope) { return x > 0 ? 1.0 : slope; }

Eigen::ArrayXXd dropout_mask(int rows, int cols, double p, Rng& rng) {
  Eigen::ArrayXXd mask(rows, cols);
  const double scale = 1.0 / (1.0 - p);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) mask(i, j) = rng.uniform01() < p ? 0.0 : scale;
  }
  return mask;
}

// Single-head attention + aggregation. Fills the trace and returns the
// post-ReLU output block.
Eigen::MatrixXd head_forward(const GatHead& head, const AttentionGraph& g,
                             const Eigen::MatrixXd& H, double slope, HeadTrace& t) {
  const int n = g.n;
  const int dh = static_cast<int>(head.W.rows());
  t.P = H * head.W.transpose();
  t.f_src = t.P * head.a.topRows(dh);
  t.f_dst = t.P * head.a.bottomRows(dh);
  t.alpha.assign(static_cast<size_t>(n), {});
  t.M.setZero(n, dh);

  std::vector<double> e;
  for (int v = 0; v < n; ++v) {
    const auto& nb = g.nbrs[static_cast<size_t>(v)];
    e.clear();
    e.push_back(leaky_relu(t.f_src(v) + t.f_dst(v), slope)); // self-loop
    for (int u : nb) e.push_back(leaky_relu(t.f_src(u) + t.f_dst(v), slope));
    const double mx = *std::max_element(e.begin(), e.end());
    double sum = 0;
    for (double& x : e) {
      x = std::exp(x - mx);
      sum += x;
    }
    auto& alpha = t.alpha[static_cast<size_t>(v)];
    alpha.resize(e.size());
    for (size_t i = 0; i < e.size(); ++i) alpha[i] = e[i] / sum;
    t.M.row(v) = alpha[0] * t.P.row(v);
    for (size_t i = 0; i < nb.size(); ++i) {
      t.M.row(v) += alpha[i + 1] * t.P.row(static_cast<size_t>(nb[i]));
    }
  }
  return t.M.cwiseMax(0.0);
}

Eigen::MatrixXd layer_forward(const GatLayer& layer, const AttentionGraph& g,
                              const Eigen::MatrixXd& H, double slope, LayerTrace& t) {
  if (H.cols() != layer.in_dim()) throw Error("gat layer: input dimension mismatch");
  t.input = H;
  t.heads.resize(layer.heads.size());
  const int dh = layer.head_dim();
  Eigen::MatrixXd out(g.n, layer.out_dim());
  for (size_t k = 0; k < layer.heads.size(); ++k) {
    out.middleCols(static_cast<long>(k) * dh, dh) =
        head_forward(layer.heads[k], g, H, slope, t.heads[k]);
  }
  return out;
}

// Backward through one head. dOut is the gradient at the post-ReLU output;
// `input` is the (post-dropout) layer input the head saw. Accumulates dW, da
// and the gradient wrt the layer input.
void head_backward(const GatHead& head, const AttentionGraph& g, const HeadTrace& t,
                   const Eigen::MatrixXd& input, const Eigen::MatrixXd& dOut, double slope,
                   Eigen::MatrixXd& dW, Eigen::MatrixXd& da, Eigen::MatrixXd& dH) {
  const int n = g.n;
  const int dh = static_cast<int>(head.W.rows());
  const Eigen::MatrixXd dM = (t.M.array() > 0.0).select(dOut, 0.0);

  Eigen::MatrixXd dP = Eigen::MatrixXd::Zero(n, dh);
  Eigen::VectorXd df_src = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd df_dst = Eigen::VectorXd::Zero(n);

  for (int v = 0; v < n; ++v) {
    const auto& nb = g.nbrs[static_cast<size_t>(v)];
    const auto& alpha = t.alpha[static_cast<size_t>(v)];
    const size_t deg = nb.size() + 1;

    // q_i = dM_v . p_{u_i}; softmax backward: de_i = alpha_i (q_i - sum_j alpha_j q_j)
    double s = 0;
    std::vector<double> q(deg);
    q[0] = dM.row(v).dot(t.P.row(v));
    s += alpha[0] * q[0];
    for (size_t i = 0; i < nb.size(); ++i) {
      q[i + 1] = dM.row(v).dot(t.P.row(static_cast<size_t>(nb[i])));
      s += alpha[i + 1] * q[i + 1];
    }
    for (size_t i = 0; i < deg; ++i) {
      const int u = i == 0 ? v : nb[i - 1];
      const double de = alpha[i] * (q[i] - s);
      const double dt = de * leaky_relu_grad(t.f_src(u) + t.f_dst(v), slope);
      df_src(u) += dt;
      df_dst(v) += dt;
      dP.row(u) += alpha[i] * dM.row(v); // from m_v = sum_i alpha_i p_{u_i}
    }
  }

  const int half = dh;
  dP += df_src * head.a.topRows(half).transpose();
  dP += df_dst * head.a.bottomRows(half).transpose();
  da.topRows(half) += t.P.transpose() * df_src;
  da.bottomRows(half) += t.P.transpose() * df_dst;
  dW += dP.transpose() * input;
  dH += dP * head.W;
}

} // namespace

GatModel init_model(const GatConfig& cfg, uint64_t seed) {
  if (cfg.in_dim <= 0) throw Error("init_model: in_dim must be set");
  if (cfg.hidden_is_total && cfg.hidden_dim % cfg.heads != 0) {
    throw Error("init_model: hidden_dim must be divisible by the head count");
  }
  Rng rng(mix64(seed));
  GatModel m;
  m.cfg = cfg;
  m.layer1 = init_layer(cfg.in_dim, cfg.head_dim(), cfg.heads, rng);
  m.layer2 = init_layer(cfg.layer_out_dim(), cfg.head_dim(), cfg.heads, rng);
  m.fc.W = glorot(cfg.classes, cfg.layer_out_dim(), rng);
  m.fc.b = Eigen::MatrixXd::Zero(cfg.classes, 1);
  return m;
}

std::vector<std::vector<double>> attention_coefficients(const GatHead& head,
                                                        const AttentionGraph& g,
                                                        const Eigen::MatrixXd& H,
                                                        double leaky_slope) {
  HeadTrace t;
  head_forward(head, g, H, leaky_slope, t);
  return t.alpha;
}

Eigen::MatrixXd gat_layer_forward(const GatLayer& layer, const AttentionGraph& g,
                                  const Eigen::MatrixXd& H, double leaky_slope) {
  LayerTrace t;
  return layer_forward(layer, g, H, leaky_slope, t);
}

Eigen::MatrixXd model_forward(const GatModel& model, const AttentionGraph& g,
                              const Eigen::MatrixXd& X, const ForwardOptions& opts,
                              ForwardTrace* trace) {
  if (X.rows() != g.n) throw Error("model_forward: row count does not match graph");
  if (X.cols() != model.cfg.in_dim) throw Error("model_forward: feature dimension mismatch");

  ForwardTrace local;
  ForwardTrace& t = trace ? *trace : local;
  const double slope = model.cfg.leaky_slope;

  Eigen::MatrixXd Xin = X;
  const bool drop = (opts.train_mode || opts.replay_masks) && model.cfg.dropout > 0.0;
  if (drop) {
    if (opts.replay_masks) {
      t.masks = *opts.replay_masks;
    } else {
      Rng rng(mix64(opts.dropout_seed));
      DropoutMasks m;
      m.input = dropout_mask(static_cast<int>(X.rows()), static_cast<int>(X.cols()),
                             model.cfg.dropout, rng);
      m.hidden = dropout_mask(g.n, model.cfg.layer_out_dim(), model.cfg.dropout, rng);
      t.masks = std::move(m);
    }
    Xin = X.array() * t.masks->input;
  }

  t.H1 = layer_forward(model.layer1, g, Xin, slope, t.l1);
  Eigen::MatrixXd H1in = t.H1;
  if (drop) H1in = t.H1.array() * t.masks->hidden;
  t.Z = layer_forward(model.layer2, g, H1in, slope, t.l2);

  t.logits = (t.Z * model.fc.W.transpose()).rowwise() + model.fc.b.col(0).transpose();
  t.probs.resize(t.logits.rows(), t.logits.cols());
  for (int v = 0; v < t.logits.rows(); ++v) {
    const double mx = t.logits.row(v).maxCoeff();
    Eigen::RowVectorXd e = (t.logits.row(v).array() - mx).exp();
    t.probs.row(v) = e / e.sum();
  }
  return t.probs;
}

double cross_entropy_loss(const Eigen::MatrixXd& probs, const std::vector<int>& labels,
                          const std::vector<int>& mask) {
  if (mask.empty()) throw Error("cross_entropy_loss: empty node mask");
  double loss = 0;
  for (int v : mask) {
    const int y = labels.at(static_cast<size_t>(v));
    if (y < 0 || y >= probs.cols()) throw Error("cross_entropy_loss: label out of range");
    loss += -std::log(std::max(probs(v, y), 1e-300));
  }
  return loss / static_cast<double>(mask.size());
}

std::vector<Eigen::MatrixXd> backward(const GatModel& model, const AttentionGraph& g,
                                      const ForwardTrace& t, const std::vector<int>& labels,
                                      const std::vector<int>& mask) {
  if (mask.empty()) throw Error("backward: empty node mask");
  const int n = g.n;
  const int C = model.cfg.classes;
  const double slope = model.cfg.leaky_slope;

  Eigen::MatrixXd dLogits = Eigen::MatrixXd::Zero(n, C);
  const double inv_m = 1.0 / static_cast<double>(mask.size());
  for (int v : mask) {
    const int y = labels.at(static_cast<size_t>(v));
    dLogits.row(v) += inv_m * t.probs.row(v);
    dLogits(v, y) -= inv_m;
  }

  Eigen::MatrixXd dfcW = dLogits.transpose() * t.Z;
  Eigen::MatrixXd dfcb = dLogits.colwise().sum().transpose();
  Eigen::MatrixXd dZ = dLogits * model.fc.W;

  const int dh = model.cfg.head_dim();
  const bool drop = t.masks.has_value();

  // layer 2
  std::vector<Eigen::MatrixXd> dW2(model.layer2.heads.size()), da2(model.layer2.heads.size());
  Eigen::MatrixXd dH1in = Eigen::MatrixXd::Zero(n, model.cfg.layer_out_dim());
  for (size_t k = 0; k < model.layer2.heads.size(); ++k) {
    dW2[k] = Eigen::MatrixXd::Zero(dh, model.layer2.in_dim());
    da2[k] = Eigen::MatrixXd::Zero(2 * dh, 1);
    head_backward(model.layer2.heads[k], g, t.l2.heads[k], t.l2.input,
                  dZ.middleCols(static_cast<long>(k) * dh, dh), slope, dW2[k], da2[k], dH1in);
  }
  Eigen::MatrixXd dH1 = drop ? (dH1in.array() * t.masks->hidden).matrix() : dH1in;

  // layer 1
  std::vector<Eigen::MatrixXd> dW1(model.layer1.heads.size()), da1(model.layer1.heads.size());
  Eigen::MatrixXd dXin = Eigen::MatrixXd::Zero(n, model.cfg.in_dim);
  for (size_t k = 0; k < model.layer1.heads.size(); ++k) {
    dW1[k] = Eigen::MatrixXd::Zero(dh, model.layer1.in_dim());
    da1[k] = Eigen::MatrixXd::Zero(2 * dh, 1);
    head_backward(model.layer1.heads[k], g, t.l1.heads[k], t.l1.input,
                  dH1.middleCols(static_cast<long>(k) * dh, dh), slope, dW1[k], da1[k], dXin);
  }

  std::vector<Eigen::MatrixXd> grads;
  for (size_t k = 0; k < dW1.size(); ++k) {
    grads.push_back(std::move(dW1[k]));
    grads.push_back(std::move(da1[k]));
  }
  for (size_t k = 0; k < dW2.size(); ++k) {
    grads.push_back(std::move(dW2[k]));
    grads.push_back(std::move(da2[k]));
  }
  grads.push_back(std::move(dfcW));
  grads.push_back(std::move(dfcb));
  return grads;
}

AdamState AdamState::for_model(const GatModel& model) {
  AdamState s;
  for (const auto* p : model.params()) {
    s.m.push_back(Eigen::MatrixXd::Zero(p->rows(), p->cols()));
    s.v.push_back(Eigen::MatrixXd::Zero(p->rows(), p->cols()));
  }
  return s;
}

void adam_step(GatModel& model, const std::vector<Eigen::MatrixXd>& grads, AdamState& state,
               const AdamConfig& cfg) {
  auto params = model.params();
  if (grads.size() != params.size() || state.m.size() != params.size()) {
    throw Error("adam_step: tensor count mismatch");
  }
  ++state.step;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
  for (size_t i = 0; i < params.size(); ++i) {
    const Eigen::MatrixXd& gr = grads[i];
    state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * gr;
    state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * gr.array().square().matrix();
    const Eigen::ArrayXXd mhat = state.m[i].array() / bc1;
    const Eigen::ArrayXXd vhat = state.v[i].array() / bc2;
    params[i]->array() -= cfg.lr * mhat / (vhat.sqrt() + cfg.eps);
  }
}

std::vector<int> argmax_rows(const Eigen::MatrixXd& probs) {
  std::vector<int> out(static_cast<size_t>(probs.rows()));
  for (int v = 0; v < probs.rows(); ++v) {
    Eigen::Index best = 0;
    probs.row(v).maxCoeff(&best);
    out[static_cast<size_t>(v)] = static_cast<int>(best);
  }
  return out;
}

} // namespace appgnn
