// SPDX-License-Identifier: Apache-2.0
#include "appgnn/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "appgnn/error.hpp"
#include "appgnn/rng.hpp"

namespace appgnn {

std::string family_name(FixtureFamily f) {
  switch (f) {
    case FixtureFamily::Exact: return "exact";
    case FixtureFamily::Lta: return "lta";
    case FixtureFamily::Lca: return "lca";
    case FixtureFamily::Loa: return "loa";
    case FixtureFamily::EtaI: return "etai";
    case FixtureFamily::Aca: return "aca";
  }
  return "?";
}

const std::vector<std::string>& default_class_names() {
  static const std::vector<std::string> names = {"adder", "multiplier", "subtractor",
                                                 "comparator", "mux"};
  return names;
}

int class_id(const std::string& name) {
  const auto& names = default_class_names();
  for (size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<int>(i);
  }
  throw Error("unknown class name '" + name + "'");
}

namespace {

/// Incremental netlist builder used by the generators. Nets are created on
/// demand; instances are named u<i>_<output-net>. Gates must be added in
/// dependency order (the creation order doubles as the topological order).
class Builder {
public:
  Builder(std::string module_name, CellLibraryPtr lib, int label)
      : lib_(std::move(lib)), label_(label) {
    n_.name = std::move(module_name);
    n_.lib = lib_;
  }

  int net(const std::string& name) {
    if (auto it = ids_.find(name); it != ids_.end()) return it->second;
    const int id = static_cast<int>(n_.nets.size());
    ids_.emplace(name, id);
    n_.nets.push_back(name);
    return id;
  }

  void input(const std::string& name) { n_.primary_inputs.push_back(net(name)); }
  void mark_output(const std::string& name) { n_.primary_outputs.push_back(net(name)); }

  void gate(const std::string& cell, std::initializer_list<std::string> ins,
            const std::string& out) {
    const int cell_id = lib_->find(cell);
    if (cell_id < 0) throw Error("generator: library lacks cell " + cell);
    GateInst g;
    g.name = "u" + std::to_string(n_.gates.size()) + "_" + out;
    g.cell = cell_id;
    for (const auto& in : ins) g.input_nets.push_back(net(in));
    if (static_cast<int>(g.input_nets.size()) != lib_->cell(cell_id).num_inputs()) {
      throw Error("generator: pin count mismatch for " + cell);
    }
    g.output_net = net(out);
    g.label = label_;
    n_.topo_order.push_back(static_cast<int>(n_.gates.size()));
    n_.gates.push_back(std::move(g));
  }

  /// Reorders nets to the canonical [inputs, outputs, wires] declaration
  /// order, so a generated netlist round-trips through its text form
  /// unchanged.
  Netlist take() {
    std::vector<int> order;
    std::vector<uint8_t> placed(n_.nets.size(), 0);
    auto place = [&](int id) {
      if (!placed[static_cast<size_t>(id)]) {
        placed[static_cast<size_t>(id)] = 1;
        order.push_back(id);
      }
    };
    for (int id : n_.primary_inputs) place(id);
    for (int id : n_.primary_outputs) place(id);
    for (int id = 0; id < static_cast<int>(n_.nets.size()); ++id) place(id);

    std::vector<int> remap(n_.nets.size());
    std::vector<std::string> nets(n_.nets.size());
    for (size_t pos = 0; pos < order.size(); ++pos) {
      remap[static_cast<size_t>(order[pos])] = static_cast<int>(pos);
      nets[pos] = n_.nets[static_cast<size_t>(order[pos])];
    }
    n_.nets = std::move(nets);
    for (int& id : n_.primary_inputs) id = remap[static_cast<size_t>(id)];
    for (int& id : n_.primary_outputs) id = remap[static_cast<size_t>(id)];
    for (GateInst& g : n_.gates) {
      for (int& id : g.input_nets) id = remap[static_cast<size_t>(id)];
      g.output_net = remap[static_cast<size_t>(g.output_net)];
    }
    return std::move(n_);
  }

private:
  CellLibraryPtr lib_;
  int label_;
  Netlist n_;
  std::unordered_map<std::string, int> ids_;
};

std::string bit(const std::string& prefix, int i) { return prefix + std::to_string(i); }

void declare_operands(Builder& b, int width) {
  for (int i = 0; i < width; ++i) b.input(bit("a", i));
  for (int i = 0; i < width; ++i) b.input(bit("b", i));
}

void declare_sums(Builder& b, int lo, int hi) {
  for (int i = lo; i < hi; ++i) b.mark_output(bit("s", i));
}

/// Ripple-carry chain over operand bits [lo, hi), sums to s<lo>..s<hi-1>.
/// When `cout_name` is nonempty the final carry net gets that name; otherwise
/// the final carry gates are not generated at all.
void ripple_adder(Builder& b, int lo, int hi, const std::string& tag,
                  const std::string& cout_name) {
  std::string carry;
  for (int i = lo; i < hi; ++i) {
    const bool last = i == hi - 1;
    const bool need_carry = !last || !cout_name.empty();
    const std::string carry_net = last ? cout_name : bit(tag + "c", i + 1);
    const std::string a = bit("a", i), bb = bit("b", i), s = bit("s", i);
    if (carry.empty()) {
      b.gate("XOR2", {a, bb}, s);
      if (need_carry) {
        b.gate("AND2", {a, bb}, carry_net);
        carry = carry_net;
      }
    } else {
      const std::string p = bit(tag + "p", i);
      b.gate("XOR2", {a, bb}, p);
      b.gate("XOR2", {p, carry}, s);
      if (need_carry) {
        const std::string g = bit(tag + "g", i), t = bit(tag + "t", i);
        b.gate("AND2", {a, bb}, g);
        b.gate("AND2", {p, carry}, t);
        b.gate("OR2", {g, t}, carry_net);
        carry = carry_net;
      }
    }
  }
}

Netlist gen_exact(int w, bool carry_out, CellLibraryPtr lib, int label) {
  Builder b("exact_add" + std::to_string(w), lib, label);
  declare_operands(b, w);
  ripple_adder(b, 0, w, "", carry_out ? "cout" : "");
  declare_sums(b, 0, w);
  if (carry_out) b.mark_output("cout");
  return b.take();
}

// Lower-part families share the exact upper ripple chain on bits [k, w) with
// zero carry-in; only the low-k structure differs.
Netlist gen_lpa(const FixtureSpec& spec, CellLibraryPtr lib, int label) {
  const int w = spec.width, k = spec.param;
  if (k < 0 || k >= w) throw Error("lower-part fixture requires 0 <= k < width");
  if (k == 0) return gen_exact(w, true, lib, label);

  Builder b(family_name(spec.family) + "_add" + std::to_string(w) + "_k" + std::to_string(k), lib,
            label);
  declare_operands(b, w);

  switch (spec.family) {
    case FixtureFamily::Lta:
      // Truncated outputs are tied low; the tie cell parks on an operand bit.
      for (int i = 0; i < k; ++i) b.gate("TIE0", {bit("a", i)}, bit("s", i));
      break;
    case FixtureFamily::Lca:
      for (int i = 0; i < k; ++i) b.gate("BUF", {bit("a", i)}, bit("s", i));
      break;
    case FixtureFamily::Loa:
      for (int i = 0; i < k; ++i) b.gate("OR2", {bit("a", i), bit("b", i)}, bit("s", i));
      break;
    case FixtureFamily::EtaI: {
      // Carry-less propagate; an OR chain forces every output strictly below
      // a generating position to 1. The top approximate bit is the plain XOR.
      for (int i = 0; i < k - 1; ++i) b.gate("XOR2", {bit("a", i), bit("b", i)}, bit("p", i));
      b.gate("XOR2", {bit("a", k - 1), bit("b", k - 1)}, bit("s", k - 1));
      std::string chain; // OR of g_j for j in (i, k)
      for (int i = k - 2; i >= 0; --i) {
        const std::string g = bit("g", i + 1);
        b.gate("AND2", {bit("a", i + 1), bit("b", i + 1)}, g);
        if (chain.empty()) {
          chain = g;
        } else {
          const std::string c = bit("ch", i + 1);
          b.gate("OR2", {g, chain}, c);
          chain = c;
        }
        b.gate("OR2", {bit("p", i), chain}, bit("s", i));
      }
      break;
    }
    default: throw Error("gen_lpa: not a lower-part family");
  }

  ripple_adder(b, k, w, "", "cout");
  declare_sums(b, 0, w);
  b.mark_output("cout");
  return b.take();
}

/// Carry chain over operand window [lo, hi); the net feeding position hi is
/// named `out_name`. Internal nets carry the `tag` prefix so blocks stay
/// disjoint.
void carry_chain(Builder& b, int lo, int hi, const std::string& tag,
                 const std::string& out_name) {
  std::string carry = hi - lo == 1 ? out_name : tag + "c" + std::to_string(lo + 1);
  b.gate("AND2", {bit("a", lo), bit("b", lo)}, carry);
  for (int j = lo + 1; j < hi; ++j) {
    const std::string p = tag + "p" + std::to_string(j), g = tag + "g" + std::to_string(j),
                      t = tag + "t" + std::to_string(j);
    const std::string c = j == hi - 1 ? out_name : tag + "c" + std::to_string(j + 1);
    b.gate("XOR2", {bit("a", j), bit("b", j)}, p);
    b.gate("AND2", {bit("a", j), bit("b", j)}, g);
    b.gate("AND2", {p, carry}, t);
    b.gate("OR2", {g, t}, c);
    carry = c;
  }
}

Netlist gen_aca(const FixtureSpec& spec, CellLibraryPtr lib, int label) {
  const int w = spec.width, m = spec.param;
  if (m < 1 || m > w) throw Error("ACA fixture requires 1 <= m <= width");
  if (m == w) return gen_exact(w, true, lib, label);

  Builder b("aca_add" + std::to_string(w) + "_m" + std::to_string(m), lib, label);
  declare_operands(b, w);

  // Low m bits are exact; no carry leaves the low block.
  ripple_adder(b, 0, m, "lo", "");

  // Each upper output bit comes from its own m-bit speculative block: the
  // carry into position i is rebuilt from the window [i-m+1, i).
  for (int i = m; i < w; ++i) {
    const std::string tag = "blk" + std::to_string(i);
    if (m == 1) {
      b.gate("XOR2", {bit("a", i), bit("b", i)}, bit("s", i));
      continue;
    }
    const std::string p = tag + "p";
    b.gate("XOR2", {bit("a", i), bit("b", i)}, p);
    carry_chain(b, i - m + 1, i, tag, tag + "cin");
    b.gate("XOR2", {p, tag + "cin"}, bit("s", i));
  }
  // Carry-out speculated from the top window.
  carry_chain(b, w - m, w, "top", "cout");
  declare_sums(b, 0, w);
  b.mark_output("cout");
  return b.take();
}

} // namespace

Netlist gen_fixture(const FixtureSpec& spec, CellLibraryPtr lib) {
  const int label = class_id("adder");
  if (spec.width < 2) throw Error("gen_fixture: width must be >= 2");
  switch (spec.family) {
    case FixtureFamily::Exact: return gen_exact(spec.width, spec.carry_out, lib, label);
    case FixtureFamily::Lta:
    case FixtureFamily::Lca:
    case FixtureFamily::Loa:
    case FixtureFamily::EtaI: return gen_lpa(spec, lib, label);
    case FixtureFamily::Aca: return gen_aca(spec, lib, label);
  }
  throw Error("gen_fixture: unknown family");
}

Netlist gen_multiplier(int w, CellLibraryPtr lib) {
  if (w < 2) throw Error("gen_multiplier: width must be >= 2");
  Builder b("mul" + std::to_string(w), lib, class_id("multiplier"));
  declare_operands(b, w);

  // col[bb] = net currently holding product bit bb. Row r ripple-adds the
  // partial products a_i*b_r into columns r..r+w-1. Column r is final once
  // row r has been absorbed, so its sum net is named s<r> directly.
  auto pp = [&](int i, int j) {
    const std::string name =
        (i == 0 && j == 0) ? bit("s", 0) : "pp" + std::to_string(i) + "_" + std::to_string(j);
    b.gate("AND2", {bit("a", i), bit("b", j)}, name);
    return name;
  };
  std::vector<std::string> col(static_cast<size_t>(2 * w));
  for (int i = 0; i < w; ++i) col[static_cast<size_t>(i)] = pp(i, 0);

  for (int r = 1; r < w; ++r) {
    const std::string tag = "r" + std::to_string(r);
    const bool last_row = r == w - 1;
    std::string carry;
    for (int i = 0; i < w; ++i) {
      const int bb = r + i;
      const std::string y = pp(i, r);
      const std::string x = col[static_cast<size_t>(bb)];
      const std::string sum = (i == 0 || last_row) ? bit("s", bb) : tag + "s" + std::to_string(bb);
      const std::string cnet = (last_row && i == w - 1) ? bit("s", 2 * w - 1)
                                                        : tag + "c" + std::to_string(bb);
      if (x.empty() && carry.empty()) {
        col[static_cast<size_t>(bb)] = y;
        continue;
      }
      if (x.empty() || carry.empty()) {
        const std::string other = x.empty() ? carry : x;
        b.gate("XOR2", {y, other}, sum);
        b.gate("AND2", {y, other}, cnet);
      } else {
        const std::string p = tag + "p" + std::to_string(bb);
        b.gate("XOR2", {x, y}, p);
        b.gate("XOR2", {p, carry}, sum);
        b.gate("MAJ3", {x, y, carry}, cnet);
      }
      col[static_cast<size_t>(bb)] = sum;
      carry = cnet;
    }
    col[static_cast<size_t>(r + w)] = carry;
  }
  declare_sums(b, 0, 2 * w);
  return b.take();
}

Netlist gen_subtractor(int w, CellLibraryPtr lib) {
  if (w < 2) throw Error("gen_subtractor: width must be >= 2");
  Builder b("sub" + std::to_string(w), lib, class_id("subtractor"));
  declare_operands(b, w);
  std::string borrow;
  for (int i = 0; i < w; ++i) {
    const bool last = i == w - 1;
    const std::string a = bit("a", i), bb = bit("b", i), d = bit("s", i), na = bit("na", i);
    const std::string bnet = last ? "bout" : bit("w", i + 1);
    b.gate("INV", {a}, na);
    if (borrow.empty()) {
      b.gate("XOR2", {a, bb}, d);
      b.gate("AND2", {na, bb}, bnet);
    } else {
      const std::string p = bit("p", i), g = bit("g", i), np = bit("np", i), t = bit("t", i);
      b.gate("XOR2", {a, bb}, p);
      b.gate("XOR2", {p, borrow}, d);
      b.gate("AND2", {na, bb}, g);
      b.gate("INV", {p}, np);
      b.gate("AND2", {np, borrow}, t);
      b.gate("OR2", {g, t}, bnet);
    }
    borrow = bnet;
  }
  declare_sums(b, 0, w);
  b.mark_output("bout");
  return b.take();
}

Netlist gen_equality_comparator(int w, CellLibraryPtr lib) {
  if (w < 1) throw Error("gen_equality_comparator: width must be >= 1");
  Builder b("cmp" + std::to_string(w), lib, class_id("comparator"));
  declare_operands(b, w);
  std::vector<std::string> level;
  for (int i = 0; i < w; ++i) {
    const std::string e = w == 1 ? "eq" : bit("e", i);
    b.gate("XNOR2", {bit("a", i), bit("b", i)}, e);
    level.push_back(e);
  }
  int tmp = 0;
  while (level.size() > 1) {
    std::vector<std::string> next;
    for (size_t i = 0; i + 1 < level.size(); i += 2) {
      const std::string out = level.size() == 2 ? "eq" : "t" + std::to_string(tmp++);
      b.gate("AND2", {level[i], level[i + 1]}, out);
      next.push_back(out);
    }
    if (level.size() % 2 == 1) next.push_back(level.back());
    level = std::move(next);
  }
  b.mark_output("eq");
  return b.take();
}

Netlist gen_mux(int w, CellLibraryPtr lib) {
  if (w < 1) throw Error("gen_mux: width must be >= 1");
  Builder b("mux" + std::to_string(w), lib, class_id("mux"));
  declare_operands(b, w);
  b.input("sel");
  for (int i = 0; i < w; ++i) {
    b.gate("MUX2", {bit("a", i), bit("b", i), "sel"}, bit("s", i));
  }
  declare_sums(b, 0, w);
  return b.take();
}

std::vector<const CircuitGraph*> Dataset::split_graphs(int which) const {
  std::vector<const CircuitGraph*> out;
  for (size_t i = 0; i < graphs.size(); ++i) {
    if (split[i] == which) out.push_back(&graphs[i]);
  }
  return out;
}

std::vector<CircuitGraph> augment(const std::vector<const CircuitGraph*>& sources,
                                  SamplingMode mode, std::vector<int> levels, uint64_t seed) {
  const bool default_levels = levels.empty();
  std::vector<CircuitGraph> out;
  for (const CircuitGraph* src : sources) {
    const CircuitGraph& g = *src;
    const int candidates = mode == SamplingMode::Leaf
                               ? static_cast<int>(identify_leaf_nodes(g).size())
                               : g.n();
    std::vector<int> use = levels;
    if (default_levels) {
      for (int n = 1; n <= std::min(9, candidates); ++n) use.push_back(n);
    }
    for (int level : use) {
      if (level < 1 || level > candidates) {
        throw Error("augment: level " + std::to_string(level) + " exceeds the " +
                    std::to_string(candidates) + " candidates of graph " + g.name);
      }
      SamplingConfig cfg;
      cfg.mode = mode;
      cfg.num_selected = level;
      cfg.rng_seed = derive_seed(seed, "augment/" + g.name, static_cast<uint64_t>(level));
      CircuitGraph s = mode == SamplingMode::Leaf ? leaf_node_sampling(g, cfg)
                                                  : random_node_sampling(g, cfg);
      const char* tag = mode == SamplingMode::Leaf ? "_leaf" : "_rand";
      s.name = g.name + tag + std::to_string(level);
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<int> make_splits(int graph_count, std::array<double, 3> fractions, uint64_t seed) {
  double total = fractions[0] + fractions[1] + fractions[2];
  if (graph_count <= 0) throw Error("make_splits: empty dataset");
  if (total <= 0) throw Error("make_splits: fractions must sum to a positive value");
  for (double& f : fractions) f /= total;

  const int n_val = static_cast<int>(std::lround(fractions[1] * graph_count));
  const int n_test = static_cast<int>(std::lround(fractions[2] * graph_count));
  const int n_train = graph_count - n_val - n_test;
  const std::array<int, 3> counts{n_train, n_val, n_test};
  for (int i = 0; i < 3; ++i) {
    if (fractions[static_cast<size_t>(i)] > 1e-12 && counts[static_cast<size_t>(i)] <= 0) {
      throw Error("make_splits: split " + std::to_string(i) + " would be empty");
    }
  }

  std::vector<int> order(static_cast<size_t>(graph_count));
  for (int i = 0; i < graph_count; ++i) order[static_cast<size_t>(i)] = i;
  Rng rng(derive_seed(seed, "splits"));
  rng.shuffle(order);

  std::vector<int> assignment(static_cast<size_t>(graph_count), 0);
  int pos = 0;
  for (int s = 0; s < 3; ++s) {
    for (int i = 0; i < counts[static_cast<size_t>(s)]; ++i) {
      assignment[static_cast<size_t>(order[static_cast<size_t>(pos++)])] = s;
    }
  }
  return assignment;
}

} // namespace appgnn
