#pragma once

#include <iosfwd>
#include <string>

#include "klsnmf/types.hpp"

namespace klsnmf {

/// Reads a dense matrix from whitespace- or comma-separated text rows.
/// Ragged rows are rejected with the offending row and field count named.
Matrix read_matrix(std::istream& in, const std::string& origin = "<stream>");
Matrix read_matrix_file(const std::string& path);

/// Writes one text row per matrix row, fields separated by single spaces,
/// with enough digits to round-trip doubles exactly.
void write_matrix(std::ostream& out, const Matrix& m);
void write_matrix_file(const std::string& path, const Matrix& m);

}  // namespace klsnmf
