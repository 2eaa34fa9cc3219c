#pragma once

#include <string>

#include "sarrs/matrix.hpp"

namespace sarrs {

// Malformed CSV input; message carries 1-based line/column context.
class CsvError : public InputError {
 public:
  using InputError::InputError;
};

// Reads a rectangular numeric CSV: comma separated, '.' decimal point, no
// locale handling. A single header row is skipped automatically when the
// first row contains any non-numeric cell. Ragged rows and non-numeric data
// cells raise CsvError with line and column numbers.
Matrix read_matrix_csv(const std::string& path);

// Parses the same dialect from an in-memory string (testing hook).
Matrix parse_matrix_csv(const std::string& text, const std::string& origin = "<string>");

// Writes comma-separated values with shortest round-trip formatting; no
// header row. Deterministic byte output for identical matrices.
void write_matrix_csv(const std::string& path, const Matrix& m);
std::string matrix_to_csv(const Matrix& m);

}  // namespace sarrs
