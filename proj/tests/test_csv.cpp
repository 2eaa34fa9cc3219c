#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "sarrs/csv.hpp"
#include "sarrs/rng.hpp"

using namespace sarrs;

TEST_CASE("plain numeric tables parse cell for cell") {
  const Matrix m = parse_matrix_csv("1,2,3\n4.5,-6,7e2\n");
  REQUIRE(m.rows() == 2);
  REQUIRE(m.cols() == 3);
  CHECK(m(0, 0) == 1.0);
  CHECK(m(0, 2) == 3.0);
  CHECK(m(1, 0) == 4.5);
  CHECK(m(1, 1) == -6.0);
  CHECK(m(1, 2) == 700.0);
}

TEST_CASE("a header row is detected and skipped") {
  const Matrix m = parse_matrix_csv("alpha,beta\n1,2\n3,4\n");
  REQUIRE(m.rows() == 2);
  CHECK(m(0, 0) == 1.0);
  CHECK(m(1, 1) == 4.0);
  // Numeric first rows are data, not headers.
  const Matrix n = parse_matrix_csv("1,2\n3,4\n");
  CHECK(n.rows() == 2);
  // A header with one numeric-looking cell still counts as a header.
  const Matrix h = parse_matrix_csv("x1,2nd\n5,6\n");
  REQUIRE(h.rows() == 1);
  CHECK(h(0, 0) == 5.0);
}

TEST_CASE("windows line endings and a missing final newline are accepted") {
  const Matrix m = parse_matrix_csv("1,2\r\n3,4");
  REQUIRE(m.rows() == 2);
  CHECK(m(1, 1) == 4.0);
}

TEST_CASE("malformed input names the offending line and column") {
  CHECK_THROWS_WITH_AS(parse_matrix_csv("1,2\n3\n"), doctest::Contains("line 2"), CsvError);
  CHECK_THROWS_WITH_AS(parse_matrix_csv("1,2\n3,4,5\n"), doctest::Contains("line 2"), CsvError);
  CHECK_THROWS_WITH_AS(parse_matrix_csv("1,2\n3,oops\n"), doctest::Contains("column 2"), CsvError);
  CHECK_THROWS_WITH_AS(parse_matrix_csv("1,2\n3,oops\n"), doctest::Contains("line 2"), CsvError);
  CHECK_THROWS_AS(parse_matrix_csv(""), CsvError);
  CHECK_THROWS_AS(parse_matrix_csv("only,header,words\n"), CsvError);  // no data rows
  CHECK_THROWS_AS(parse_matrix_csv("1,2\n3,\n"), CsvError);            // empty data cell
  CHECK_THROWS_WITH_AS(parse_matrix_csv("1,2\n3,4 x\n"), doctest::Contains("column 2"), CsvError);
}

TEST_CASE("round trips preserve every bit") {
  Rng rng(501);
  for (int trial = 0; trial < 5; ++trial) {
    Matrix m = rng.gaussian_matrix(7, 4);
    m(0, 0) = 0.1;  // not exactly representable
    m(1, 1) = -1e-300;
    m(2, 2) = 12345678901234.5;
    m(3, 3) = 0.0;
    const Matrix back = parse_matrix_csv(matrix_to_csv(m));
    REQUIRE(back.rows() == m.rows());
    REQUIRE(back.cols() == m.cols());
    CHECK((back - m).norm() == 0.0);
  }
}

TEST_CASE("serialization is deterministic and headerless") {
  Rng rng(503);
  const Matrix m = rng.gaussian_matrix(3, 3);
  const std::string a = matrix_to_csv(m);
  const std::string b = matrix_to_csv(m);
  CHECK(a == b);
  CHECK(a.find("col") == std::string::npos);
  // Shortest representation: plain small integers stay compact.
  CHECK(matrix_to_csv(Matrix::Identity(2, 2)) == "1,0\n0,1\n");
}

TEST_CASE("file round trip and missing-file reporting") {
  const std::string path = "test_csv_roundtrip.tmp.csv";
  Rng rng(505);
  const Matrix m = rng.gaussian_matrix(4, 2);
  write_matrix_csv(path, m);
  const Matrix back = read_matrix_csv(path);
  CHECK((back - m).norm() == 0.0);
  std::remove(path.c_str());
  CHECK_THROWS_WITH_AS(read_matrix_csv("definitely_missing_file.csv"),
                       doctest::Contains("definitely_missing_file.csv"), InputError);
}

TEST_CASE("parser errors carry the origin name") {
  CHECK_THROWS_WITH_AS(parse_matrix_csv("a,b\n", "input.csv"), doctest::Contains("input.csv"),
                       CsvError);
}
