#include "sarrs/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace sarrs {

namespace {

// Strict double parse of a whole cell; leading/trailing spaces tolerated.
bool parse_cell(const std::string& cell, double& out) {
  std::size_t begin = cell.find_first_not_of(" \t");
  if (begin == std::string::npos) return false;
  std::size_t end = cell.find_last_not_of(" \t") + 1;
  const char* first = cell.data() + begin;
  const char* last = cell.data() + end;
  if (first < last && *first == '+') ++first;  // from_chars rejects leading '+'
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return cells;
}

}  // namespace

Matrix parse_matrix_csv(const std::string& text, const std::string& origin) {
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  std::size_t lineno = 0;
  bool header_checked = false;

  std::istringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_line(line);

    if (!header_checked) {
      header_checked = true;
      bool numeric = true;
      double tmp;
      for (const std::string& cell : cells)
        if (!parse_cell(cell, tmp)) { numeric = false; break; }
      if (!numeric) {
        width = cells.size();
        continue;  // single header row
      }
    }

    if (width == 0) width = cells.size();
    if (cells.size() != width)
      throw CsvError(origin + ": line " + std::to_string(lineno) + " has " +
                     std::to_string(cells.size()) + " fields, expected " + std::to_string(width));
    std::vector<double> row(width);
    for (std::size_t c = 0; c < width; ++c) {
      if (!parse_cell(cells[c], row[c]))
        throw CsvError(origin + ": line " + std::to_string(lineno) + ", column " +
                       std::to_string(c + 1) + ": cannot parse \"" + cells[c] + "\" as a number");
    }
    rows.push_back(std::move(row));
  }

  if (rows.empty()) throw CsvError(origin + ": no numeric data rows");
  Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < width; ++j) out(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  return out;
}

Matrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open \"" + path + "\" for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_matrix_csv(buf.str(), path);
}

std::string matrix_to_csv(const Matrix& m) {
  std::ostringstream os;
  char buf[64];
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), m(i, j));
      os.write(buf, ptr - buf);
      if (j + 1 < m.cols()) os.put(',');
    }
    os.put('\n');
  }
  return os.str();
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open \"" + path + "\" for writing");
  out << matrix_to_csv(m);
  if (!out) throw InputError("failed while writing \"" + path + "\"");
}

}  // namespace sarrs
