// SPDX-License-Identifier: Apache-2.0
//
// Shared test fixtures: hand-built netlists, a random DAG generator, and the
// brute-force oracles the sampler and fixture tests check against. Everything
// here is independent of the implementation paths under test.
#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "appgnn/graph.hpp"
#include "appgnn/rng.hpp"

namespace appgnn::testfix {

/// Hand-built 3-bit ripple-carry adder: 10 gates, 6 primary inputs, 4
/// primary outputs (s0..s2, cout via a majority gate). Verified exhaustively
/// against integer addition.
inline const char* kHandAdder3 = R"(
module add3;
input a0, a1, a2, b0, b1, b2;
output s0, s1, s2, cout;
wire c1, p1, g1, t1, c2, p2;
XOR2 u_s0 (.A(a0), .B(b0), .Y(s0));
AND2 u_c1 (.A(a0), .B(b0), .Y(c1));
XOR2 u_p1 (.A(a1), .B(b1), .Y(p1));
XOR2 u_s1 (.A(p1), .B(c1), .Y(s1));
AND2 u_g1 (.A(a1), .B(b1), .Y(g1));
AND2 u_t1 (.A(p1), .B(c1), .Y(t1));
OR2 u_c2 (.A(g1), .B(t1), .Y(c2));
XOR2 u_p2 (.A(a2), .B(b2), .Y(p2));
XOR2 u_s2 (.A(p2), .B(c2), .Y(s2));
MAJ3 u_cout (.A(a2), .B(b2), .C(c2), .Y(cout));
endmodule
)";

/// Demonstration graph for the sampling walk-throughs: a 3-bit adder without
/// carry-out plus one buffered pass-through bit. Key nodes:
///   U17 (top sum)    - its datapath is {U14, U15, U16, U18}, four nodes
///   U19 (middle sum) - a leaf with an empty datapath
///   U20 (buffer)     - a root; removing it removes nothing else
/// Leaves: U11, U17, U19, U20.
inline const char* kDemoAdder3 = R"(
module demo_adder3;
input a0, a1, a2, b0, b1, b2, d0;
output s0, s1, s2, y0;
wire c1, p1, g1, t1, c2, p2;
XOR2 U11 (.A(a0), .B(b0), .Y(s0));
AND2 U12 (.A(a0), .B(b0), .Y(c1));
XOR2 U13 (.A(a1), .B(b1), .Y(p1));
AND2 U14 (.A(a1), .B(b1), .Y(g1));
AND2 U15 (.A(p1), .B(c1), .Y(t1));
OR2 U16 (.A(g1), .B(t1), .Y(c2));
XOR2 U17 (.A(p2), .B(c2), .Y(s2));
XOR2 U18 (.A(a2), .B(b2), .Y(p2));
XOR2 U19 (.A(p1), .B(c1), .Y(s1));
BUF U20 (.A(d0), .Y(y0));
endmodule
)";

/// Library and netlist reproducing the worked feature-vector example: node g
/// is an XNOR primary output whose two-hop neighborhood holds two NAND2, two
/// XNOR, one NOR and one INV gate, with input degree 2 and output degree 1.
inline const char* kFig6Library = "NAND2 2\nXNOR 2\nNOR 2\nINV 1\nBUF 1\n";
inline const char* kFig6Netlist = R"(
module fig6;
input i1, i2, i3, i4, i5, i6, i7;
output go;
wire x1, x2, x3, x4, x5, x6;
NAND2 n3 (.A(i1), .B(i2), .Y(x3));
NOR n4 (.A(i3), .B(i4), .Y(x4));
XNOR n5 (.A(i5), .B(i6), .Y(x5));
INV n6 (.A(i7), .Y(x6));
NAND2 n1 (.A(x3), .B(x4), .Y(x1));
XNOR n2 (.A(x5), .B(x6), .Y(x2));
XNOR g (.A(x1), .B(x2), .Y(go));
endmodule
)";

/// Synthetic graph straight from an edge list; stored feature fields are
/// derived structurally. Cells cycle through the library.
inline CircuitGraph graph_from_edges(int n, const std::vector<std::pair<int, int>>& edges,
                                     CellLibraryPtr lib) {
  CircuitGraph g;
  g.name = "synthetic";
  g.lib = std::move(lib);
  g.nodes.resize(static_cast<size_t>(n));
  g.out_adj.assign(static_cast<size_t>(n), {});
  g.in_adj.assign(static_cast<size_t>(n), {});
  std::vector<std::set<int>> out(static_cast<size_t>(n)), in(static_cast<size_t>(n));
  for (auto [u, v] : edges) {
    if (u == v) continue;
    out[static_cast<size_t>(u)].insert(v);
    in[static_cast<size_t>(v)].insert(u);
  }
  for (int v = 0; v < n; ++v) {
    g.out_adj[static_cast<size_t>(v)].assign(out[static_cast<size_t>(v)].begin(),
                                             out[static_cast<size_t>(v)].end());
    g.in_adj[static_cast<size_t>(v)].assign(in[static_cast<size_t>(v)].begin(),
                                            in[static_cast<size_t>(v)].end());
  }
  for (int v = 0; v < n; ++v) {
    GraphNode& node = g.nodes[static_cast<size_t>(v)];
    node.name = "n" + std::to_string(v);
    node.cell = v % g.lib->size();
    node.label = 0;
    node.is_pi = g.in_adj[static_cast<size_t>(v)].empty();
    node.is_po = g.out_adj[static_cast<size_t>(v)].empty();
    node.in_degree = g.structural_in_degree(v);
    node.out_degree = g.structural_out_degree(v);
  }
  // second pass: the census reads every neighbor's cell id
  for (int v = 0; v < n; ++v) {
    g.nodes[static_cast<size_t>(v)].two_hop = two_hop_histogram(g, v);
  }
  return g;
}

/// Random DAG on up to `max_nodes` nodes, edges always from lower to higher
/// rank under a random permutation.
inline CircuitGraph random_dag(Rng& rng, int max_nodes, CellLibraryPtr lib) {
  const int n = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(max_nodes)));
  std::vector<int> rank(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) rank[static_cast<size_t>(i)] = i;
  rng.shuffle(rank);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.uniform01() < 0.25) {
        edges.emplace_back(rank[static_cast<size_t>(i)], rank[static_cast<size_t>(j)]);
      }
    }
  }
  return graph_from_edges(n, edges, std::move(lib));
}

/// Brute-force datapath oracle: p belongs to the datapath of c iff p is a
/// proper ancestor with out-degree 1 and every node on the unique out-edge
/// chain from p to c has out-degree 1.
inline std::set<int> datapath_oracle(const CircuitGraph& g, int c) {
  std::set<int> result;
  for (int p = 0; p < g.n(); ++p) {
    if (p == c || g.structural_out_degree(p) != 1) continue;
    int cur = p;
    std::set<int> seen{p};
    bool reaches = false;
    while (true) {
      cur = g.out_adj[static_cast<size_t>(cur)][0];
      if (cur == c) {
        reaches = true;
        break;
      }
      if (g.structural_out_degree(cur) != 1 || seen.count(cur)) break;
      seen.insert(cur);
    }
    if (reaches) result.insert(p);
  }
  return result;
}

inline std::set<int> leaf_oracle(const CircuitGraph& g) {
  std::set<int> out;
  for (int v = 0; v < g.n(); ++v) {
    if (g.out_adj[static_cast<size_t>(v)].empty()) out.insert(v);
  }
  return out;
}

/// Survivors of removing every selected node plus its oracle datapath.
inline std::set<int> sample_oracle(const CircuitGraph& g, const std::vector<int>& selected) {
  std::set<int> removed;
  for (int s : selected) {
    removed.insert(s);
    const auto dp = datapath_oracle(g, s);
    removed.insert(dp.begin(), dp.end());
  }
  std::set<int> kept;
  for (int v = 0; v < g.n(); ++v) {
    if (!removed.count(v)) kept.insert(v);
  }
  return kept;
}

// ---- integer reference models for the adder fixture families ----

struct AdderRef {
  uint64_t sum = 0; // w output bits
  int cout = 0;
};

inline uint64_t lowmask(int k) { return k >= 64 ? ~0ull : (1ull << k) - 1; }

inline AdderRef ref_exact(int w, uint64_t a, uint64_t b) {
  const uint64_t t = a + b;
  return {t & lowmask(w), static_cast<int>((t >> w) & 1)};
}

inline AdderRef ref_lpa_top(int w, int k, uint64_t a, uint64_t b) {
  const uint64_t t = (a >> k) + (b >> k);
  return {(t & lowmask(w - k)) << k, static_cast<int>((t >> (w - k)) & 1)};
}

inline AdderRef ref_lta(int w, int k, uint64_t a, uint64_t b) { return ref_lpa_top(w, k, a, b); }

inline AdderRef ref_lca(int w, int k, uint64_t a, uint64_t b) {
  AdderRef r = ref_lpa_top(w, k, a, b);
  r.sum |= a & lowmask(k);
  return r;
}

inline AdderRef ref_loa(int w, int k, uint64_t a, uint64_t b) {
  AdderRef r = ref_lpa_top(w, k, a, b);
  r.sum |= (a | b) & lowmask(k);
  return r;
}

inline AdderRef ref_etai(int w, int k, uint64_t a, uint64_t b) {
  AdderRef r = ref_lpa_top(w, k, a, b);
  for (int i = 0; i < k; ++i) {
    int bit = static_cast<int>(((a ^ b) >> i) & 1);
    for (int j = i + 1; j < k && !bit; ++j) bit |= static_cast<int>(((a & b) >> j) & 1);
    r.sum |= static_cast<uint64_t>(bit) << i;
  }
  return r;
}

inline AdderRef ref_aca(int w, int m, uint64_t a, uint64_t b) {
  AdderRef r;
  const uint64_t low = (a & lowmask(m)) + (b & lowmask(m));
  r.sum = low & lowmask(m);
  for (int i = m; i < w; ++i) {
    const uint64_t wa = (a >> (i - m + 1)) & lowmask(m);
    const uint64_t wb = (b >> (i - m + 1)) & lowmask(m);
    r.sum |= (((wa + wb) >> (m - 1)) & 1) << i;
  }
  const uint64_t ta = (a >> (w - m)) & lowmask(m);
  const uint64_t tb = (b >> (w - m)) & lowmask(m);
  r.cout = static_cast<int>(((ta + tb) >> m) & 1);
  return r;
}

} // namespace appgnn::testfix
