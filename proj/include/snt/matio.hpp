#pragma once

#include <iosfwd>
#include <string>

#include "snt/types.hpp"

namespace snt {

// Text format for matrices:
//   - lines whose first non-blank character is '#' are comments
//   - header line: "n" for an n x n matrix, or "n m" for n x m
//   - n rows of whitespace-separated values
// Values may be arithmetic expressions without embedded whitespace, e.g.
// 0.5, 3/4, sqrt(2), (2+sqrt(3))/(2*sqrt(3)), so exact irrational entries
// stay readable in files.
Matrix read_matrix(std::istream& in);
Matrix read_matrix_file(const std::string& path);

void write_matrix(std::ostream& out, const Matrix& m);
void write_matrix_file(const std::string& path, const Matrix& m);

// Evaluates one value expression; throws ParseError on malformed input.
double parse_value(const std::string& token);

}  // namespace snt
