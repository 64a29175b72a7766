// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cctype>
#include <deque>
#include <sstream>
#include <unordered_set>

#include "appgnn/error.hpp"
#include "appgnn/netlist.hpp"

namespace appgnn {
namespace {

// Statement-level scanner. Comments (// and #) run to end of line;
// statements are terminated by ';' except `endmodule`.
class Scanner {
public:
  explicit Scanner(std::string_view text) : text_(text) {}

  // Next token, or empty at end of input.
  std::string next() {
    skip_space_and_comments();
    if (pos_ >= text_.size()) return {};
    const char c = text_[pos_];
    if (is_punct(c)) {
      ++pos_;
      return std::string(1, c);
    }
    size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           !is_punct(text_[pos_])) {
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

private:
  static bool is_punct(char c) {
    return c == ';' || c == ',' || c == '(' || c == ')' || c == '.';
  }

  void skip_space_and_comments() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  size_t pos_ = 0;
};

const std::unordered_set<std::string> kUnsupported = {
    "reg", "always", "assign", "initial", "parameter", "generate", "specify"};

bool valid_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

int resolve_label(const std::string& inst, const LabelConfig& cfg) {
  if (auto it = cfg.sidecar.find(inst); it != cfg.sidecar.end()) {
    auto cls = cfg.class_map.find(it->second);
    if (cls == cfg.class_map.end()) {
      throw ValidationError("label sidecar maps '" + inst + "' to unknown class '" + it->second +
                            "'");
    }
    return cls->second;
  }
  if (cfg.use_prefix) {
    if (auto pos = inst.find('_'); pos != std::string::npos && pos > 0) {
      auto cls = cfg.class_map.find(inst.substr(0, pos));
      if (cls != cfg.class_map.end()) return cls->second;
    }
  }
  return -1;
}

} // namespace

Netlist parse_netlist(std::string_view text, CellLibraryPtr lib, const LabelConfig* labels) {
  Netlist n;
  n.lib = lib;

  Scanner sc(text);
  std::unordered_map<std::string, int> net_ids;
  auto declare_net = [&](const std::string& name) {
    if (!valid_identifier(name)) throw ParseError("invalid net name '" + name + "'");
    if (net_ids.count(name)) throw ParseError("net '" + name + "' declared twice");
    net_ids.emplace(name, static_cast<int>(n.nets.size()));
    n.nets.push_back(name);
  };

  std::string tok = sc.next();
  if (tok != "module") throw ParseError("expected 'module', got '" + tok + "'");
  n.name = sc.next();
  if (!valid_identifier(n.name)) throw ParseError("invalid module name '" + n.name + "'");
  if (sc.next() != ";") throw ParseError("expected ';' after module name");

  bool saw_endmodule = false;
  std::unordered_set<std::string> inst_names;
  while (!(tok = sc.next()).empty()) {
    if (tok == "endmodule") {
      saw_endmodule = true;
      break;
    }
    if (kUnsupported.count(tok)) {
      throw ParseError("unsupported construct '" + tok + "' (sequential or behavioral Verilog)");
    }
    if (tok == "input" || tok == "output" || tok == "wire") {
      const std::string kind = tok;
      while (true) {
        std::string name = sc.next();
        declare_net(name);
        if (kind == "input") n.primary_inputs.push_back(net_ids.at(name));
        if (kind == "output") n.primary_outputs.push_back(net_ids.at(name));
        std::string sep = sc.next();
        if (sep == ";") break;
        if (sep != ",") throw ParseError("expected ',' or ';' in " + kind + " list");
      }
      continue;
    }

    // Instance: CELL name (.PIN(net), ...);
    const std::string cell_name = tok;
    const int cell_id = lib->find(cell_name);
    if (cell_id < 0) throw ValidationError("unknown cell '" + cell_name + "'");
    const CellDef& cell = lib->cell(cell_id);

    GateInst g;
    g.cell = cell_id;
    g.name = sc.next();
    if (!valid_identifier(g.name)) throw ParseError("invalid instance name '" + g.name + "'");
    if (!inst_names.insert(g.name).second) {
      throw ParseError("duplicate instance name '" + g.name + "'");
    }
    if (sc.next() != "(") throw ParseError("expected '(' in instance " + g.name);

    g.input_nets.assign(cell.input_pins.size(), -1);
    bool have_output = false;
    while (true) {
      if (sc.next() != ".") throw ParseError("expected '.PIN' in instance " + g.name);
      const std::string pin = sc.next();
      if (sc.next() != "(") throw ParseError("expected '(' after pin ." + pin);
      const std::string net = sc.next();
      if (sc.next() != ")") throw ParseError("expected ')' after net in ." + pin);
      auto it = net_ids.find(net);
      if (it == net_ids.end()) {
        throw ValidationError("instance '" + g.name + "' references undeclared net '" + net +
                              "' (dangling connection)");
      }
      if (pin == cell.output_pin) {
        if (have_output) throw ParseError("output pin connected twice in instance " + g.name);
        g.output_net = it->second;
        have_output = true;
      } else {
        auto pit = std::find(cell.input_pins.begin(), cell.input_pins.end(), pin);
        if (pit == cell.input_pins.end()) {
          throw ParseError("cell '" + cell.name + "' has no pin '" + pin + "' (instance " +
                           g.name + ")");
        }
        const auto idx = static_cast<size_t>(pit - cell.input_pins.begin());
        if (g.input_nets[idx] != -1) {
          throw ParseError("pin '" + pin + "' connected twice in instance " + g.name);
        }
        g.input_nets[idx] = it->second;
      }
      const std::string sep = sc.next();
      if (sep == ")") break;
      if (sep != ",") throw ParseError("expected ',' or ')' in instance " + g.name);
    }
    if (sc.next() != ";") throw ParseError("expected ';' after instance " + g.name);
    if (!have_output) {
      throw ValidationError("instance '" + g.name + "' leaves output pin unconnected");
    }
    for (size_t p = 0; p < g.input_nets.size(); ++p) {
      if (g.input_nets[p] == -1) {
        throw ValidationError("instance '" + g.name + "' leaves input pin '" +
                              cell.input_pins[p] + "' unconnected (dangling input)");
      }
    }
    if (labels) g.label = resolve_label(g.name, *labels);
    n.gates.push_back(std::move(g));
  }
  if (!saw_endmodule) throw ParseError("missing 'endmodule'");

  // Driver check: exactly one driver per consumed net.
  std::vector<int> driver(n.nets.size(), -1); // gate id, -2 for primary input
  for (int pi : n.primary_inputs) driver[static_cast<size_t>(pi)] = -2;
  for (int gi = 0; gi < static_cast<int>(n.gates.size()); ++gi) {
    const int net = n.gates[static_cast<size_t>(gi)].output_net;
    if (driver[static_cast<size_t>(net)] != -1) {
      throw ValidationError("net '" + n.nets[static_cast<size_t>(net)] + "' is multiply driven");
    }
    driver[static_cast<size_t>(net)] = gi;
  }
  auto require_driver = [&](int net, const std::string& where) {
    if (driver[static_cast<size_t>(net)] == -1) {
      throw ValidationError("net '" + n.nets[static_cast<size_t>(net)] + "' consumed by " + where +
                            " has no driver");
    }
  };
  for (const GateInst& g : n.gates) {
    for (int net : g.input_nets) require_driver(net, "instance '" + g.name + "'");
  }
  for (int po : n.primary_outputs) require_driver(po, "primary output");

  // Topological order over the gate graph; a leftover gate means a cycle.
  std::vector<int> indeg(n.gates.size(), 0);
  std::vector<std::vector<int>> succ(n.gates.size());
  for (int gi = 0; gi < static_cast<int>(n.gates.size()); ++gi) {
    for (int net : n.gates[static_cast<size_t>(gi)].input_nets) {
      const int d = driver[static_cast<size_t>(net)];
      if (d >= 0) {
        succ[static_cast<size_t>(d)].push_back(gi);
        ++indeg[static_cast<size_t>(gi)];
      }
    }
  }
  std::deque<int> ready;
  for (int gi = 0; gi < static_cast<int>(n.gates.size()); ++gi) {
    if (indeg[static_cast<size_t>(gi)] == 0) ready.push_back(gi);
  }
  while (!ready.empty()) {
    const int gi = ready.front();
    ready.pop_front();
    n.topo_order.push_back(gi);
    for (int s : succ[static_cast<size_t>(gi)]) {
      if (--indeg[static_cast<size_t>(s)] == 0) ready.push_back(s);
    }
  }
  if (n.topo_order.size() != n.gates.size()) {
    throw ValidationError("netlist '" + n.name + "' contains a combinational cycle");
  }
  return n;
}

} // namespace appgnn
