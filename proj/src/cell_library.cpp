// SPDX-License-Identifier: Apache-2.0
#include "appgnn/cell_library.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "appgnn/error.hpp"

namespace appgnn {
namespace {

bool parity(std::span<const uint8_t> in) {
  int p = 0;
  for (uint8_t b : in) p ^= b;
  return p != 0;
}

bool all_of(std::span<const uint8_t> in) {
  return std::all_of(in.begin(), in.end(), [](uint8_t b) { return b != 0; });
}

bool any_of(std::span<const uint8_t> in) {
  return std::any_of(in.begin(), in.end(), [](uint8_t b) { return b != 0; });
}

struct BuiltinCell {
  const char* name;
  int arity;
  CellKind kind;
};

// (name, arity) pairs that carry built-in boolean semantics. User libraries
// reusing these names get simulation support for free.
constexpr std::array<BuiltinCell, 26> kBuiltins{{
    {"BUF", 1, CellKind::Buf},     {"INV", 1, CellKind::Inv},
    {"AND2", 2, CellKind::And},    {"AND3", 3, CellKind::And},
    {"AND4", 4, CellKind::And},    {"OR2", 2, CellKind::Or},
    {"OR3", 3, CellKind::Or},      {"OR4", 4, CellKind::Or},
    {"NAND2", 2, CellKind::Nand},  {"NAND3", 3, CellKind::Nand},
    {"NAND4", 4, CellKind::Nand},  {"NOR2", 2, CellKind::Nor},
    {"NOR3", 3, CellKind::Nor},    {"NOR4", 4, CellKind::Nor},
    {"XOR2", 2, CellKind::Xor},    {"XNOR2", 2, CellKind::Xnor},
    {"XOR", 2, CellKind::Xor},     {"XNOR", 2, CellKind::Xnor},
    {"AOI21", 3, CellKind::Aoi21}, {"AOI22", 4, CellKind::Aoi22},
    {"OAI21", 3, CellKind::Oai21}, {"OAI22", 4, CellKind::Oai22},
    {"MUX2", 3, CellKind::Mux2},   {"MAJ3", 3, CellKind::Maj3},
    {"TIE0", 1, CellKind::Tie0},   {"TIE1", 1, CellKind::Tie1},
}};

CellKind builtin_kind(std::string_view name, int arity) {
  for (const auto& b : kBuiltins) {
    if (name == b.name && arity == b.arity) return b.kind;
  }
  return CellKind::Custom;
}

std::vector<std::string> make_pins(int n) {
  std::vector<std::string> pins;
  pins.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    pins.push_back(std::string(1, static_cast<char>('A' + i % 26)) +
                   (i >= 26 ? std::to_string(i / 26) : ""));
  }
  return pins;
}

} // namespace

bool eval_cell(CellKind kind, std::span<const uint8_t> in) {
  switch (kind) {
    case CellKind::Buf: return in[0] != 0;
    case CellKind::Inv: return in[0] == 0;
    case CellKind::And: return all_of(in);
    case CellKind::Or: return any_of(in);
    case CellKind::Nand: return !all_of(in);
    case CellKind::Nor: return !any_of(in);
    case CellKind::Xor: return parity(in);
    case CellKind::Xnor: return !parity(in);
    case CellKind::Aoi21: return !((in[0] && in[1]) || in[2]);
    case CellKind::Aoi22: return !((in[0] && in[1]) || (in[2] && in[3]));
    case CellKind::Oai21: return !((in[0] || in[1]) && in[2]);
    case CellKind::Oai22: return !((in[0] || in[1]) && (in[2] || in[3]));
    case CellKind::Mux2: return in[2] ? in[1] != 0 : in[0] != 0;
    case CellKind::Maj3: return (in[0] + in[1] + in[2]) >= 2;
    case CellKind::Tie0: return false;
    case CellKind::Tie1: return true;
    case CellKind::Custom: break;
  }
  throw Error("eval_cell: cell has no registered boolean semantics");
}

CellLibrary CellLibrary::from_cells(std::vector<CellDef> cells) {
  CellLibrary lib;
  lib.cells_ = std::move(cells);
  for (int i = 0; i < lib.size(); ++i) {
    const CellDef& c = lib.cells_[static_cast<size_t>(i)];
    if (c.input_pins.empty()) {
      throw ParseError("cell '" + c.name + "' has no input pins");
    }
    std::vector<std::string> pins = c.input_pins;
    pins.push_back(c.output_pin);
    std::sort(pins.begin(), pins.end());
    if (std::adjacent_find(pins.begin(), pins.end()) != pins.end()) {
      throw ParseError("cell '" + c.name + "' has duplicate pin names");
    }
    if (!lib.index_.emplace(c.name, i).second) {
      throw ParseError("duplicate cell name '" + c.name + "' in library");
    }
    if (c.name == "BUF") lib.buf_index_ = i;
  }
  return lib;
}

int CellLibrary::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? -1 : it->second;
}

CellLibrary parse_cell_library(std::string_view text) {
  std::vector<CellDef> cells;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    std::istringstream ls(line);
    std::string name;
    if (!(ls >> name)) continue; // blank line
    int arity = 0;
    if (!(ls >> arity) || arity < 1) {
      throw ParseError("library line " + std::to_string(lineno) +
                       ": expected 'NAME <num_inputs>' with num_inputs >= 1");
    }
    std::string extra;
    if (ls >> extra) {
      throw ParseError("library line " + std::to_string(lineno) + ": trailing token '" + extra + "'");
    }
    CellDef def;
    def.name = name;
    def.input_pins = make_pins(arity);
    def.kind = builtin_kind(name, arity);
    cells.push_back(std::move(def));
  }
  return CellLibrary::from_cells(std::move(cells));
}

const std::string& default_library_text() {
  static const std::string text =
      "# default cell library; order defines the feature layout\n"
      "BUF 1\n"
      "INV 1\n"
      "AND2 2\n"
      "AND3 3\n"
      "AND4 4\n"
      "OR2 2\n"
      "OR3 3\n"
      "OR4 4\n"
      "NAND2 2\n"
      "NAND3 3\n"
      "NAND4 4\n"
      "NOR2 2\n"
      "NOR3 3\n"
      "NOR4 4\n"
      "XOR2 2\n"
      "XNOR2 2\n"
      "AOI21 3\n"
      "AOI22 4\n"
      "OAI21 3\n"
      "OAI22 4\n"
      "MUX2 3\n"
      "MAJ3 3\n"
      "TIE0 1\n"
      "TIE1 1\n";
  return text;
}

CellLibraryPtr default_library() {
  static const CellLibraryPtr lib =
      std::make_shared<const CellLibrary>(parse_cell_library(default_library_text()));
  return lib;
}

} // namespace appgnn
