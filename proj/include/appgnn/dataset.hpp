// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "appgnn/graph.hpp"
#include "appgnn/netlist.hpp"
#include "appgnn/sampler.hpp"
#include "appgnn/standardize.hpp"

namespace appgnn {

/// Adder fixture families. Exact is a ripple-carry adder; the others follow
/// the approximate-adder catalog: LTA zeroes the k output LSBs, LCA copies
/// operand LSBs, LOA ORs the operand LSBs, EtaI does a carry-less XOR sum
/// with a set-to-one OR chain, ACA speculates each upper output bit from an
/// m-bit operand window.
enum class FixtureFamily { Exact, Lta, Lca, Loa, EtaI, Aca };

std::string family_name(FixtureFamily f);

struct FixtureSpec {
  FixtureFamily family = FixtureFamily::Exact;
  int width = 8;
  int param = 0;          // k for lower-part families, m for ACA
  bool carry_out = true;  // honored by the exact family
};

/// Gate-level adder netlist over the default library; every gate is labeled
/// `adder`. Throws on invalid parameter ranges (k in [0, w), m in [1, w]).
Netlist gen_fixture(const FixtureSpec& spec, CellLibraryPtr lib);

/// Distractor-class generators (all gates carry the class label):
Netlist gen_multiplier(int width, CellLibraryPtr lib);           // array multiplier
Netlist gen_subtractor(int width, CellLibraryPtr lib);           // ripple-borrow a - b
Netlist gen_equality_comparator(int width, CellLibraryPtr lib);  // XNOR reduce
Netlist gen_mux(int width, CellLibraryPtr lib);                  // per-bit 2:1 mux

const std::vector<std::string>& default_class_names(); // adder, multiplier, ...
int class_id(const std::string& name);

struct Dataset {
  std::vector<CircuitGraph> graphs;
  std::vector<int> split; // 0 = train, 1 = validation, 2 = test
  std::vector<std::string> class_names = default_class_names();

  std::vector<const CircuitGraph*> split_graphs(int which) const;
};

/// For each source graph and each level n, one sampled variant with n nodes
/// selected for removal. Empty `levels` means 1..9, capped per graph at the
/// number of available candidates (leaves in leaf mode, all nodes in random
/// mode). Explicit levels that exceed the candidate count throw.
std::vector<CircuitGraph> augment(const std::vector<const CircuitGraph*>& sources,
                                  SamplingMode mode, std::vector<int> levels, uint64_t seed);

/// Graph-level split assignment: seeded shuffle, validation and test counts
/// are the rounded fractions, the remainder goes to train. A split with a
/// positive fraction but zero graphs throws.
std::vector<int> make_splits(int graph_count, std::array<double, 3> fractions, uint64_t seed);

} // namespace appgnn
