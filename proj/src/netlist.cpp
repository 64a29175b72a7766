// SPDX-License-Identifier: Apache-2.0
#include "appgnn/netlist.hpp"

#include <algorithm>
#include <sstream>

#include "appgnn/error.hpp"

namespace appgnn {

int Netlist::net_index(std::string_view net) const {
  for (int i = 0; i < static_cast<int>(nets.size()); ++i) {
    if (nets[static_cast<size_t>(i)] == net) return i;
  }
  return -1;
}

std::string serialize_netlist(const Netlist& n) {
  std::ostringstream out;
  out << "module " << n.name << ";\n";
  auto emit_list = [&](const char* kw, const std::vector<int>& ids) {
    if (ids.empty()) return;
    out << kw << " ";
    for (size_t i = 0; i < ids.size(); ++i) {
      if (i) out << ", ";
      out << n.nets[static_cast<size_t>(ids[i])];
    }
    out << ";\n";
  };
  emit_list("input", n.primary_inputs);
  emit_list("output", n.primary_outputs);

  std::vector<uint8_t> is_port(n.nets.size(), 0);
  for (int id : n.primary_inputs) is_port[static_cast<size_t>(id)] = 1;
  for (int id : n.primary_outputs) is_port[static_cast<size_t>(id)] = 1;
  std::vector<int> wires;
  for (int i = 0; i < static_cast<int>(n.nets.size()); ++i) {
    if (!is_port[static_cast<size_t>(i)]) wires.push_back(i);
  }
  emit_list("wire", wires);

  for (const GateInst& g : n.gates) {
    const CellDef& cell = n.lib->cell(g.cell);
    out << cell.name << " " << g.name << " (";
    for (size_t p = 0; p < g.input_nets.size(); ++p) {
      out << "." << cell.input_pins[p] << "(" << n.nets[static_cast<size_t>(g.input_nets[p])]
          << "), ";
    }
    out << "." << cell.output_pin << "(" << n.nets[static_cast<size_t>(g.output_net)] << "));\n";
  }
  out << "endmodule\n";
  return out.str();
}

std::vector<uint8_t> simulate(const Netlist& n, std::span<const uint8_t> pi_values) {
  if (pi_values.size() != n.primary_inputs.size()) {
    throw Error("simulate: expected " + std::to_string(n.primary_inputs.size()) +
                " primary input values, got " + std::to_string(pi_values.size()));
  }
  for (const GateInst& g : n.gates) {
    if (n.lib->cell(g.cell).kind == CellKind::Custom) {
      throw Error("simulate: cell '" + n.lib->cell(g.cell).name +
                  "' has no registered boolean semantics");
    }
  }
  std::vector<uint8_t> value(n.nets.size(), 0);
  for (size_t i = 0; i < pi_values.size(); ++i) {
    value[static_cast<size_t>(n.primary_inputs[i])] = pi_values[i] ? 1 : 0;
  }
  std::vector<uint8_t> ins;
  for (int gi : n.topo_order) {
    const GateInst& g = n.gates[static_cast<size_t>(gi)];
    ins.clear();
    for (int net : g.input_nets) ins.push_back(value[static_cast<size_t>(net)]);
    value[static_cast<size_t>(g.output_net)] = eval_cell(n.lib->cell(g.cell).kind, ins) ? 1 : 0;
  }
  std::vector<uint8_t> out;
  out.reserve(n.primary_outputs.size());
  for (int net : n.primary_outputs) out.push_back(value[static_cast<size_t>(net)]);
  return out;
}

WordIo::WordIo(const Netlist& n, const std::vector<std::pair<std::string, int>>& input_words,
               const std::vector<std::pair<std::string, int>>& output_words) {
  num_pis_ = n.primary_inputs.size();
  std::unordered_map<int, int> pi_slot, po_slot;
  for (size_t i = 0; i < n.primary_inputs.size(); ++i) pi_slot[n.primary_inputs[i]] = static_cast<int>(i);
  for (size_t i = 0; i < n.primary_outputs.size(); ++i) po_slot[n.primary_outputs[i]] = static_cast<int>(i);

  // A word of width 1 may be a single unindexed net (cout, bout, eq).
  auto lookup = [&](const std::string& prefix, int b, int width) {
    int net = n.net_index(prefix + std::to_string(b));
    if (net < 0 && width == 1) net = n.net_index(prefix);
    return net;
  };
  for (const auto& [prefix, width] : input_words) {
    std::vector<int> bits;
    for (int b = 0; b < width; ++b) {
      const int net = lookup(prefix, b, width);
      if (net < 0 || !pi_slot.count(net)) {
        throw Error("WordIo: missing primary input net " + prefix + std::to_string(b));
      }
      bits.push_back(pi_slot.at(net));
    }
    input_bit_pos_.push_back(std::move(bits));
  }
  for (const auto& [prefix, width] : output_words) {
    std::vector<int> bits;
    for (int b = 0; b < width; ++b) {
      const int net = lookup(prefix, b, width);
      bits.push_back(net >= 0 && po_slot.count(net) ? po_slot.at(net) : -1);
    }
    output_bit_pos_.push_back(std::move(bits));
  }
}

std::vector<uint64_t> WordIo::run(const Netlist& n, std::span<const uint64_t> operands) const {
  if (operands.size() != input_bit_pos_.size()) {
    throw Error("WordIo::run: operand count mismatch");
  }
  std::vector<uint8_t> pis(num_pis_, 0);
  for (size_t w = 0; w < operands.size(); ++w) {
    const auto& bits = input_bit_pos_[w];
    for (size_t b = 0; b < bits.size(); ++b) {
      pis[static_cast<size_t>(bits[b])] = (operands[w] >> b) & 1u;
    }
  }
  const std::vector<uint8_t> pos = simulate(n, pis);
  std::vector<uint64_t> out;
  out.reserve(output_bit_pos_.size());
  for (const auto& bits : output_bit_pos_) {
    uint64_t v = 0;
    for (size_t b = 0; b < bits.size(); ++b) {
      if (bits[b] >= 0 && pos[static_cast<size_t>(bits[b])]) v |= 1ull << b;
    }
    out.push_back(v);
  }
  return out;
}

} // namespace appgnn
