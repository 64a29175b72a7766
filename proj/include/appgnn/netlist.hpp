// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "appgnn/cell_library.hpp"

namespace appgnn {

/// One gate instance. Input nets are stored in cell pin order; the label is a
/// class id (-1 when unlabeled).
struct GateInst {
  std::string name;
  int cell = -1;
  std::vector<int> input_nets;
  int output_net = -1;
  int label = -1;

  bool operator==(const GateInst&) const = default;
};

/// A validated flattened combinational netlist. Valid means: every referenced
/// net is declared, every net has exactly one driver (gate output or primary
/// input), every gate pin is connected, and the gate graph is acyclic.
struct Netlist {
  std::string name;
  std::vector<std::string> nets;     // declaration order
  std::vector<GateInst> gates;       // file order
  std::vector<int> primary_inputs;   // net ids, declaration order
  std::vector<int> primary_outputs;  // net ids, declaration order
  std::vector<int> topo_order;       // gate ids, inputs-before-users
  CellLibraryPtr lib;

  int net_index(std::string_view net) const;

  bool operator==(const Netlist& o) const {
    return name == o.name && nets == o.nets && gates == o.gates &&
           primary_inputs == o.primary_inputs && primary_outputs == o.primary_outputs;
  }
};

/// How per-gate labels are recovered. Sidecar entries (instance name ->
/// class name) take precedence; otherwise, when enabled, an instance name
/// prefix up to the first '_' that matches a class name is used.
struct LabelConfig {
  std::map<std::string, int> class_map; // class name -> id
  std::unordered_map<std::string, std::string> sidecar;
  bool use_prefix = true;
};

/// Parses the structural netlist subset:
///   module NAME; input n, ...; output n, ...; wire n, ...;
///   CELL inst (.PIN(net), ...); ... endmodule
/// with `//` comments. Throws ParseError / ValidationError.
Netlist parse_netlist(std::string_view text, CellLibraryPtr lib,
                      const LabelConfig* labels = nullptr);

/// Canonical text form; parse(serialize(n)) == n.
std::string serialize_netlist(const Netlist& n);

/// Evaluates the netlist. `pi_values` is aligned with primary_inputs; the
/// result is aligned with primary_outputs. Requires boolean semantics for
/// every instantiated cell.
std::vector<uint8_t> simulate(const Netlist& n, std::span<const uint8_t> pi_values);

/// Word-level convenience used by the adder fixtures: operand bits are nets
/// `<prefix>0..<prefix>{w-1}` (LSB first).
class WordIo {
public:
  WordIo(const Netlist& n, const std::vector<std::pair<std::string, int>>& input_words,
         const std::vector<std::pair<std::string, int>>& output_words);

  /// Simulates with the given operand values; returns output words. Output
  /// bits whose net does not exist in the netlist read as 0.
  std::vector<uint64_t> run(const Netlist& n, std::span<const uint64_t> operands) const;

private:
  std::vector<std::vector<int>> input_bit_pos_;  // per word, PI slot per bit
  std::vector<std::vector<int>> output_bit_pos_; // per word, PO slot per bit (-1 = absent)
  size_t num_pis_;
};

} // namespace appgnn
