#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "polsig/csv.hpp"
#include "polsig/rng.hpp"

using namespace polsig;

TEST_CASE("csv parse keeps line numbers and quoted fields") {
  std::istringstream in("a,b\n1,\"x,y\"\n\n3,4\r\n");
  const auto t = csv::parse(in, "mem.csv");
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][1] == "x,y");
  CHECK(t.rows[1][1] == "4");
  CHECK(t.lines[1] == 4);
  CHECK(t.where(1) == "mem.csv:4");
  CHECK(t.column("b") == 1);
  CHECK_FALSE(t.find_column("zz").has_value());
  CHECK(testing::kind_of([&] { (void)t.column("zz"); }) == ErrorKind::SchemaError);
}

TEST_CASE("csv rejects ragged rows and bad numbers") {
  std::istringstream in("a,b\n1\n");
  CHECK(testing::kind_of([&] { csv::parse(in, "r.csv"); }) == ErrorKind::SchemaError);
  CHECK(testing::kind_of([] { csv::parse_int("1.5", "x"); }) == ErrorKind::SchemaError);
  CHECK(testing::kind_of([] { csv::parse_double("abc", "x"); }) == ErrorKind::SchemaError);
  CHECK(testing::kind_of([] { csv::parse_double("", "x"); }) == ErrorKind::SchemaError);
  CHECK(csv::parse_int("-7", "x") == -7);
}

TEST_CASE("csv format round-trips doubles exactly") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int k = 0; k < 2000; ++k) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 20) - 10);
    CHECK(csv::parse_double(csv::format(v), "rt") == v);
  }
  CHECK(csv::format(0.0) == "0");
  CHECK(csv::format(-0.0) == "0");
  CHECK(csv::format(0.5) == "0.5");
}

TEST_CASE("write_atomic creates parents and replaces content") {
  testing::TempDir dir("csv");
  const auto target = dir.path / "a" / "b" / "out.csv";
  csv::write_atomic(target, "one\n");
  csv::write_atomic(target, "two\n");
  CHECK(testing::slurp(target) == "two\n");
  CHECK_FALSE(std::filesystem::exists(target.string() + ".tmp"));
}

TEST_CASE("named streams are distinct and stable") {
  CHECK(stream_seed(1, "a") == stream_seed(1, "a"));
  CHECK(stream_seed(1, "a") != stream_seed(1, "b"));
  CHECK(stream_seed(1, "a") != stream_seed(2, "a"));
  auto e1 = make_stream(5, "x");
  auto e2 = make_stream(5, "x");
  CHECK(e1() == e2());
}
