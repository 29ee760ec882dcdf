#pragma once

#include <iosfwd>

#include "vpp/lp/linear_program.hpp"

namespace vpp::lp {

/// Writes `program` in fixed-format MPS (NAME/ROWS/COLUMNS/RHS/BOUNDS) so
/// it can be cross-checked with external LP tooling. Rows are named R<i>,
/// columns C<j>; the diagnostic names are emitted as comments.
void writeMps(const LinearProgram& program, std::ostream& out, const char* name = "VPP");

}  // namespace vpp::lp
