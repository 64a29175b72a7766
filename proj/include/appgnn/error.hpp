// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace appgnn {

/// Base error for all toolkit failures.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed library or netlist text.
struct ParseError : Error {
  using Error::Error;
};

/// Structurally invalid netlist (multiple drivers, dangling input, cycle, ...).
struct ValidationError : Error {
  using Error::Error;
};

} // namespace appgnn
