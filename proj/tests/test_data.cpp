#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "codec/data.hpp"
#include "codec/errors.hpp"

using namespace codec;

namespace {

Dataset csv(const std::string& text, const std::string& response = "y") {
  std::istringstream in(text);
  return parse_csv(in, response);
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected codec::Error");
  return ErrorKind::argument;
}

// Quadratic reference: counts by definition.
RankVector brute_ranks(const std::vector<double>& y) {
  RankVector rk;
  for (double a : y) {
    std::int64_t le = 0, ge = 0;
    for (double b : y) {
      le += b <= a;
      ge += b >= a;
    }
    rk.r.push_back(le);
    rk.l.push_back(ge);
  }
  return rk;
}

}  // namespace

TEST_CASE("load_csv parses a small table in row order") {
  const Dataset d = csv("y,x1\n1,0.5\n2,1e-3\n3,-2.5E2\n");
  CHECK(d.n() == 3);
  CHECK(d.num_columns() == 2);
  CHECK(d.response() == "y");
  CHECK(d.values("x1")[1] == doctest::Approx(1e-3));
  CHECK(d.values("x1")[2] == -250.0);
  CHECK(d.predictor_indices() == std::vector<std::size_t>{1});
}

TEST_CASE("load_csv reads from disk and tolerates CRLF and blank trailing lines") {
  const auto path = std::filesystem::temp_directory_path() / "codec_test_data.csv";
  {
    std::ofstream out(path);
    out << "x,y\r\n1,2\r\n3,4\r\n\r\n";
  }
  const Dataset d = load_csv(path, "y");
  CHECK(d.n() == 2);
  CHECK(d.response_index() == 1);
  CHECK(d.y()[1] == 4.0);
  std::filesystem::remove(path);
}

TEST_CASE("ingestion errors name the row and column") {
  try {
    csv("y,x1\n1,2\n3,NA\n");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ingestion);
    const std::string msg = e.what();
    CHECK(msg.find("row 2") != std::string::npos);
    CHECK(msg.find("x1") != std::string::npos);
  }
  CHECK(kind_of([] { csv("y,x\n1,inf\n2,3\n"); }) == ErrorKind::ingestion);
  CHECK(kind_of([] { csv("y,x\n1,2,3\n2,3\n"); }) == ErrorKind::ingestion);
  CHECK(kind_of([] { csv("y,x\n1,\n2,3\n"); }) == ErrorKind::ingestion);
  CHECK(kind_of([] { load_csv("/nonexistent/file.csv", "y"); }) == ErrorKind::ingestion);
}

TEST_CASE("schema and size errors") {
  CHECK(kind_of([] { csv("y,x,x\n1,2,3\n4,5,6\n"); }) == ErrorKind::schema);
  CHECK(kind_of([] { csv("a,b\n1,2\n3,4\n", "y"); }) == ErrorKind::schema);
  CHECK(kind_of([] { csv("y,x\n1,2\n"); }) == ErrorKind::size);
  CHECK(kind_of([] { csv("y,x\n"); }) == ErrorKind::size);
}

TEST_CASE("write_csv round-trips values bit-exactly") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  std::vector<double> a(50), b(50);
  for (auto& v : a) v = g(rng) * 1e-7;
  for (auto& v : b) v = g(rng) * 1e9;
  const Dataset d({{"y", a, false}, {"x", b, false}}, "y");
  std::stringstream ss;
  write_csv(ss, d);
  const Dataset back = parse_csv(ss, "y");
  CHECK(back.values("y")[7] == a[7]);
  for (std::size_t i = 0; i < 50; ++i) {
    REQUIRE(back.values("y")[i] == a[i]);
    REQUIRE(back.values("x")[i] == b[i]);
  }
}

TEST_CASE("standardize z-scores with divisor n-1") {
  const Dataset d({{"y", {9, 8, 7}, false}, {"x", {1, 2, 3}, false}, {"c", {5, 5, 5}, false}}, "y");
  const Dataset s = standardize(d, true);
  CHECK(s.values("x")[0] == doctest::Approx(-1.0));
  CHECK(s.values("x")[1] == doctest::Approx(0.0));
  CHECK(s.values("x")[2] == doctest::Approx(1.0));
  CHECK(s.values("c")[0] == 0.0);
  CHECK(s.values("c")[2] == 0.0);
  CHECK(s.column(2).constant);
  CHECK_FALSE(s.column(1).constant);
  // Response untouched unless requested.
  CHECK(s.values("y")[0] == 9.0);
  CHECK(standardize(d, false).values("y")[0] == doctest::Approx(1.0));
}

TEST_CASE("standardize matches a two-pass reference and is idempotent") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 40.0);
  std::vector<double> x(997), y(997);
  for (auto& v : x) v = u(rng);
  for (auto& v : y) v = u(rng);
  const Dataset d({{"y", y, false}, {"x", x, false}}, "y");
  const auto s = standardize(d, true);
  const auto zs = s.values("x");

  // Two-pass reference on long double for mean and sd of the output.
  long double mean = 0;
  for (double v : zs) mean += v;
  mean /= zs.size();
  long double ss = 0;
  for (double v : zs) ss += (v - mean) * (v - mean);
  const long double sd = std::sqrt(ss / (zs.size() - 1));
  CHECK(std::abs(static_cast<double>(mean)) < 1e-12);
  CHECK(std::abs(static_cast<double>(sd) - 1.0) < 1e-12);

  const auto twice = standardize(s, true);
  for (std::size_t i = 0; i < zs.size(); ++i) REQUIRE(std::abs(twice.values("x")[i] - zs[i]) < 1e-12);
}

TEST_CASE("ranks follow the counting definitions") {
  auto a = ranks(std::vector<double>{10, 20, 30});
  CHECK(a.r == std::vector<std::int64_t>{1, 2, 3});
  CHECK(a.l == std::vector<std::int64_t>{3, 2, 1});
  auto b = ranks(std::vector<double>{5, 5, 7});
  CHECK(b.r == std::vector<std::int64_t>{2, 2, 3});
  CHECK(b.l == std::vector<std::int64_t>{3, 3, 1});
}

TEST_CASE("ranks with ties equal the quadratic reference") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> u(0, 60);
  std::vector<double> y(1000);
  for (auto& v : y) v = u(rng) * 0.5;
  const auto fast = ranks(y);
  const auto slow = brute_ranks(y);
  CHECK(fast.r == slow.r);
  CHECK(fast.l == slow.l);
}

TEST_CASE("rank invariants over random inputs") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng() % 300;
    const bool with_ties = trial % 2 == 0;
    std::vector<double> y(n);
    std::normal_distribution<double> g;
    for (auto& v : y) v = with_ties ? std::round(g(rng) * 3) : g(rng);
    const auto rk = ranks(y);

    // Strictly increasing transform leaves ranks unchanged.
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = std::exp(y[i] / 4.0) + 2.0 * y[i];
    const auto rt = ranks(t);
    REQUIRE(rt.r == rk.r);
    REQUIRE(rt.l == rk.l);

    for (std::size_t i = 0; i < n; ++i) {
      const auto equal = std::count(y.begin(), y.end(), y[i]);
      REQUIRE(rk.r[i] + rk.l[i] - equal == static_cast<std::int64_t>(n));
      REQUIRE(rk.r[i] >= 1);
      REQUIRE(rk.l[i] <= static_cast<std::int64_t>(n));
    }
    if (!with_ties) {
      auto sorted = rk.r;
      std::sort(sorted.begin(), sorted.end());
      for (std::size_t i = 0; i < n; ++i) {
        REQUIRE(sorted[i] == static_cast<std::int64_t>(i + 1));
        REQUIRE(rk.l[i] == static_cast<std::int64_t>(n) + 1 - rk.r[i]);
      }
    }
  }
}

TEST_CASE("dataset matrix extraction") {
  const Dataset d({{"y", {1, 2}, false}, {"a", {3, 4}, false}, {"b", {5, 6}, false}}, "y");
  const std::vector<std::size_t> cols{2, 1};
  const Matrix m = d.matrix(cols);
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 2);
  CHECK(m(0, 0) == 5.0);
  CHECK(m(1, 1) == 4.0);
  CHECK(hconcat(m, Matrix::from_column(d.y()))(1, 2) == 2.0);
}
