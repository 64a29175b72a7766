// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace appgnn {

/// Boolean semantics of a cell. Custom means "declared in a user library but
/// with no built-in function"; such cells parse and convert to graphs fine,
/// they just cannot be simulated.
enum class CellKind {
  Buf,
  Inv,
  And,
  Or,
  Nand,
  Nor,
  Xor,
  Xnor,
  Aoi21, // !((A&B)|C)
  Aoi22, // !((A&B)|(C&D))
  Oai21, // !((A|B)&C)
  Oai22, // !((A|B)&(C|D))
  Mux2,  // C ? B : A
  Maj3,  // majority(A,B,C)
  Tie0,  // constant 0, input ignored
  Tie1,  // constant 1, input ignored
  Custom,
};

bool eval_cell(CellKind kind, std::span<const uint8_t> inputs);

struct CellDef {
  std::string name;
  std::vector<std::string> input_pins; // A, B, C, D, E, ...
  std::string output_pin = "Y";
  CellKind kind = CellKind::Custom;

  int num_inputs() const { return static_cast<int>(input_pins.size()); }
};

/// Ordered set of recognized gate types. The order is load-bearing: it fixes
/// the one-hot and neighborhood sections of the node feature layout, so it is
/// preserved exactly as given in the library file.
class CellLibrary {
public:
  static CellLibrary from_cells(std::vector<CellDef> cells);

  int size() const { return static_cast<int>(cells_.size()); }
  const CellDef& cell(int id) const { return cells_.at(static_cast<size_t>(id)); }
  const std::vector<CellDef>& cells() const { return cells_; }

  /// Index of a cell by name, or -1.
  int find(std::string_view name) const;
  bool has(std::string_view name) const { return find(name) >= 0; }

  /// Index of the BUF cell (-1 if the library has none). Leaf-node sampling
  /// requires it for replacement nodes.
  int buf_index() const { return buf_index_; }

private:
  std::vector<CellDef> cells_;
  std::unordered_map<std::string, int> index_;
  int buf_index_ = -1;
};

using CellLibraryPtr = std::shared_ptr<const CellLibrary>;

/// Parses the line-oriented library format: one `NAME <num_inputs>` per line,
/// `#` comments. Cells whose (name, arity) matches a built-in gate get
/// simulation semantics attached automatically.
CellLibrary parse_cell_library(std::string_view text);

/// The default 24-cell library used by the fixture generators.
const std::string& default_library_text();
CellLibraryPtr default_library();

} // namespace appgnn
