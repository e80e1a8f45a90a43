#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "tlq/errors.hpp"
#include "tlq/io.hpp"
#include "tlq/signal.hpp"

using namespace tlq;

TEST_SUITE("signal") {

TEST_CASE("time grid") {
  const TimeGrid g = TimeGrid::span(1.0, 0.25);
  CHECK(g.count == 5);
  CHECK(g.back() == 1.0);
  CHECK(TimeGrid::span(1.0, 0.3).back() <= 1.0);
  CHECK_THROWS_AS(TimeGrid::span(1.0, 0.0), InputError);
}

TEST_CASE("interpolation and domain") {
  const Signal s(TimeGrid{0.0, 1.0, 3}, {0.0, 2.0, 4.0});
  CHECK(s.at(0.5) == 1.0);
  CHECK(s.at(2.0) == 4.0);
  CHECK_THROWS_AS(s.at(2.5), NumericalError);
  CHECK(s.at(2.5, DomainPolicy::zero_extend) == 0.0);
  const Signal r = s.resampled(TimeGrid{0.0, 0.5, 5});
  CHECK(r[3] == 3.0);
  CHECK_THROWS_AS(Signal(TimeGrid{0.0, 1.0, 2}, {1.0}), InputError);
}

TEST_CASE("normalization") {
  const Signal c(TimeGrid{0.0, 0.1, 4}, {3.0, 3.0, 3.0, 3.0});
  const Signal n = normalize_max_abs(c);
  for (double v : n.samples()) CHECK(v == 1.0);
  REQUIRE(n.normalization());
  CHECK(n.normalization()->divisor == 3.0);

  const TimeGrid g = TimeGrid::span(5.0, 1e-3);
  std::vector<double> v(g.count);
  for (std::size_t i = 0; i < g.count; ++i) v[i] = std::exp(-g.at(i)) * std::cos(10.0 * g.at(i));
  const Signal d = normalize_max_abs(Signal(g, v));
  CHECK(d.normalization()->divisor == 1.0);
  CHECK(d.normalization()->time == 0.0);

  std::vector<double> neg{0.5, -2.0, 1.0};
  const Signal s = normalize_max_abs(Signal(TimeGrid{0.0, 1.0, 3}, neg));
  CHECK(s[1] == -1.0);
  for (double x : s.samples()) CHECK(std::abs(x) <= 1.0);

  CHECK_THROWS_AS(normalize_max_abs(Signal::zeros(TimeGrid{0.0, 1.0, 3})), InputError);
}

}

TEST_SUITE("io") {

TEST_CASE("doubles round-trip through text") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
    const std::string s = io::format_double(v);
    CHECK(std::stod(s) == v);
  }
}

TEST_CASE("csv writing and reading") {
  const auto dir = std::filesystem::temp_directory_path() / "tlq_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "t.csv";
  io::write_csv(path, {"x", "y"}, {{0.0, 0.5, 1.0}, {1.0 / 3.0, 2.0, -1.0}});
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "x,y");
  const auto [x, y] = io::read_two_column_csv(path);
  REQUIRE(x.size() == 3);
  CHECK(y[0] == 1.0 / 3.0);
  CHECK(x[2] == 1.0);
  CHECK(io::csv_string({"a"}, {{1.5}}) == "a\n1.5\n");
  CHECK_THROWS(io::read_two_column_csv(dir / "missing.csv"));
}

}
