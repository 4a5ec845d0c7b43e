#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qsl/matrix.hpp"

namespace qsl {

// One complex entry as "a+bi" with 17 significant digits, so a write/parse
// round trip reproduces the doubles bit for bit.
std::string format_complex(Complex z);

// Accepts "a+bi", "a-bi", "bi", and plain "a"; exponent signs do not split
// the token. Throws std::invalid_argument on anything else.
Complex parse_complex(std::string_view token);

// Text blocks of the form
//   # dim 3
//   1+0i 0+0i 0+0i
//   ...
// one row per line, concatenated for multiple matrices. Blank lines and
// other '#' comments are ignored.
std::string write_matrices(std::span<const ComplexMatrix> matrices);

// Parses every "# dim N" block in the text. `source_name` labels error
// messages (falls back to "matrix input"); errors carry 1-based line
// numbers and entry positions.
std::vector<ComplexMatrix> parse_matrices(std::string_view text,
                                          std::string_view source_name = {});

std::vector<ComplexMatrix> read_matrix_file(const std::string& path);
void write_matrix_file(const std::string& path,
                       std::span<const ComplexMatrix> matrices);

}  // namespace qsl
