#include <doctest.h>

#include <sstream>

#include "chaoskit/errors.hpp"
#include "chaoskit/serialize.hpp"

using namespace chaoskit;

TEST_CASE("chaos vector json round trip") {
  ChaosVector v;
  v.truncation = {3, 4};
  v.coeffs[MultiIndex::zero()] = 1.25;
  v.coeffs[MultiIndex::unit(2)] = -0.75;
  v.coeffs[MultiIndex::from_dense({1, 0, 2})] = 0.0625;

  const std::string text = to_json(v);
  const ChaosVector back = chaos_vector_from_json(text);
  CHECK(back.truncation.max_order == 3);
  CHECK(back.truncation.max_dim == 4);
  CHECK(back.coeffs.size() == v.coeffs.size());
  for (const auto& [alpha, c] : v.coeffs) CHECK(back.coeff(alpha) == c);

  // Ranks ascend in the emitted text (stable key order).
  const auto pos0 = text.find("\"0\"");
  const auto pos2 = text.find("\"2\"");
  CHECK(pos0 != std::string::npos);
  CHECK(pos0 < pos2);
}

TEST_CASE("chaos process json round trip") {
  ChaosProcess p;
  p.truncation = {2, 2};
  p.grid = TimeGrid(2.0, 4);
  p.coeffs[MultiIndex::zero()] = {1.0, 1.5, 2.0, 2.5, 3.0};
  p.coeffs[MultiIndex::unit(1)] = {0.0, 0.1, 0.2, 0.3, 0.4};

  const ChaosProcess back = chaos_process_from_json(to_json(p));
  CHECK(back.grid == p.grid);
  CHECK(back.truncation.max_order == 2);
  for (const auto& [alpha, path] : p.coeffs) {
    const auto& other = back.coeffs.at(alpha);
    for (std::size_t i = 0; i < path.size(); ++i) CHECK(other[i] == path[i]);
  }
}

TEST_CASE("csv writer: header, separators, width check") {
  std::ostringstream out;
  CsvWriter csv(out, {"t", "value"});
  const double row1[] = {0.5, 1.0 / 3.0};
  csv.row(row1);
  const std::string text = out.str();
  CHECK(text.find("t,value\n") == 0);
  CHECK(text.find("0.5,") != std::string::npos);
  CHECK(text.find("0.33333333333333331") != std::string::npos);

  const double bad[] = {1.0};
  CHECK_THROWS_AS(csv.row(bad), Error);
}

TEST_CASE("format_double round trips") {
  for (double v : {1.0 / 3.0, 2.718281828459045, -1e-17, 0.0, 12345.6789}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("chaos vector json golden form") {
  // The on-disk format is part of the interface: truncation header, then
  // graded ranks as keys in ascending order.
  ChaosVector v;
  v.truncation = {2, 2};
  v.coeffs[MultiIndex::zero()] = 1.0;
  v.coeffs[MultiIndex::unit(1)] = 0.5;      // rank 1
  v.coeffs[MultiIndex::from_dense({0, 2})] = -2.0;  // rank 5
  CHECK(to_json(v) ==
        R"({"truncation":{"max_order":2,"max_dim":2},"coeffs":{"0":1.0,"1":0.5,"5":-2.0}})");
}
