#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "codec/data.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Outcome o;
  o.code = codec::cli::run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "codec_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string write_file(const std::string& name, const std::string& text) {
  const fs::path p = scratch(name);
  std::ofstream(p) << text;
  return p.string();
}

}  // namespace

TEST_CASE("codec subcommand on the toy tables") {
  const auto toy = write_file("toy.csv", "y,z\n1,1\n2,2\n3,4\n");
  const Outcome a = run({"codec", "--data", toy, "--y", "y", "--z", "z"});
  REQUIRE(a.code == 0);
  const json r = a.report();
  CHECK(r["command"] == "codec");
  CHECK(r["results"]["t_n"].get<double>() == -0.5);
  CHECK(r["seed"] == 0);
  CHECK(r["timing_ms"].get<double>() >= 0.0);
  CHECK(r["inputs"]["y"] == "y");

  const auto toy2 = write_file("toy2.csv", "y,x,z\n1,0,0\n2,1,1\n3,3,3\n");
  const Outcome b = run({"codec", "--data", toy2, "--y", "y", "--z", "z", "--x", "x"});
  REQUIRE(b.code == 0);
  CHECK(b.report()["results"]["t_n"].get<double>() == 0.0);

  const auto toy3 = write_file("toy3.csv", "y,x,z1,z2\n1,0,3,0\n2,1,0,1\n3,3,1,0\n");
  const Outcome c = run({"codec", "--data", toy3, "--y", "y", "--z", "z1", "--x", "x", "--seed", "4"});
  REQUIRE(c.code == 0);
  CHECK(c.report()["results"]["t_n"].get<double>() == 0.5);
  CHECK(c.report()["seed"] == 4);
  const Outcome two = run({"codec", "--data", toy3, "--y", "y", "--z", "z1,z2", "--x", "x"});
  CHECK(two.code == 0);
  CHECK(two.report()["results"]["q"] == 2);
}

TEST_CASE("results payload is reproducible") {
  const auto path = scratch("repro.csv").string();
  REQUIRE(run({"sim", "--model", "mod1", "--n", "300", "--p", "2", "--seed", "2", "--out", path}).code == 0);
  const Outcome a = run({"codec", "--data", path, "--y", "y", "--z", "x2", "--x", "x1", "--seed", "3"});
  const Outcome b = run({"codec", "--data", path, "--y", "y", "--z", "x2", "--x", "x1", "--seed", "3"});
  CHECK(a.report()["results"].dump() == b.report()["results"].dump());
  CHECK(a.report()["results"]["t_n"].get<double>() > 0.5);
}

TEST_CASE("exit codes") {
  const auto toy = write_file("exit_toy.csv", "y,z\n1,1\n2,2\n3,4\n");
  CHECK(run({"codec", "--data", scratch("missing.csv").string(), "--y", "y", "--z", "z"}).code == 2);
  CHECK(run({"codec", "--data", toy, "--y", "nope", "--z", "z"}).code == 2);
  CHECK(run({"codec", "--data", toy, "--y", "y", "--z", "w"}).code == 2);
  CHECK(run({"codec", "--data", toy, "--y", "y"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"bench", "--experiment", "ex99"}).code == 2);

  const auto bad = write_file("bad.csv", "y,z\n1,1\n2,NA\n");
  const Outcome ingest = run({"codec", "--data", bad, "--y", "y", "--z", "z"});
  CHECK(ingest.code == 2);
  CHECK(ingest.out.empty());
  CHECK(ingest.err.find("row 2") != std::string::npos);

  const auto flat = write_file("flat.csv", "y,z\n7,1\n7,2\n7,3\n");
  CHECK(run({"codec", "--data", flat, "--y", "y", "--z", "z"}).code == 3);
  CHECK(run({"foci", "--data", flat, "--y", "y"}).code == 3);

  const auto func = write_file("func.csv", "y,x,z\n1,0,0\n1,0,1\n2,5,2\n2,5,3\n");
  CHECK(run({"codec", "--data", func, "--y", "y", "--z", "z", "--x", "x"}).code == 3);

  CHECK(run({"sim", "--model", "mod1", "--n", "4", "--p", "2", "--out", "/nonexistent/dir/x.csv"}).code == 2);
  CHECK(run({"sim", "--model", "unknown", "--n", "4", "--p", "2", "--out", scratch("u.csv").string()}).code == 2);
}

TEST_CASE("sim writes the requested shape and model") {
  const auto path = scratch("mod1.csv").string();
  const Outcome o = run({"sim", "--model", "mod1", "--n", "4", "--p", "2", "--seed", "1", "--out", path});
  REQUIRE(o.code == 0);
  CHECK(o.report()["results"]["rows"] == 4);
  CHECK(o.report()["results"]["columns"] == 3);
  const codec::Dataset d = codec::load_csv(path, "y");
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(d.y()[i] == std::fmod(d.values("x1")[i] + d.values("x2")[i], 1.0));
  }

  const auto wide = scratch("wide.csv").string();
  REQUIRE(run({"sim", "--model", "interaction", "--n", "2000", "--p", "1000", "--seed", "7", "--out", wide}).code == 0);
  const codec::Dataset w = codec::load_csv(wide, "y");
  CHECK(w.n() == 2000);
  CHECK(w.num_columns() == 1001);
}

TEST_CASE("sim interaction-noise residual has unit sd") {
  const auto path = scratch("noise.csv").string();
  REQUIRE(run({"sim", "--model", "interaction-noise", "--n", "20000", "--p", "3", "--seed", "5", "--out", path}).code == 0);
  const codec::Dataset d = codec::load_csv(path, "y");
  double s = 0, ss = 0;
  const std::size_t n = d.n();
  for (std::size_t i = 0; i < n; ++i) {
    const double x1 = d.values("x1")[i], x2 = d.values("x2")[i], x3 = d.values("x3")[i];
    const double e = d.y()[i] - (x1 * x2 + x1 - x3);
    s += e;
    ss += e * e;
  }
  const double mean = s / n;
  const double sd = std::sqrt((ss - n * mean * mean) / (n - 1));
  CHECK(std::abs(mean) <= 5.0 / std::sqrt(double(n)));
  CHECK(std::abs(sd - 1.0) <= 5.0 / std::sqrt(2.0 * n));
}

TEST_CASE("foci subcommand") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::ostringstream single;
  single << "y,x1\n";
  for (int i = 0; i < 300; ++i) {
    const double x = g(rng);
    single << x << ',' << x << '\n';
  }
  const auto path = write_file("single.csv", single.str());
  const Outcome o = run({"foci", "--data", path, "--y", "y", "--seed", "1"});
  REQUIRE(o.code == 0);
  const json r = o.report()["results"];
  CHECK(r["selected"] == json::array({"x1"}));
  CHECK(r["selected_index"] == json::array({1}));
  CHECK(r["stop_cause"] == "exhausted_all");

  const auto neg = write_file("neg.csv", "y,x1\n1,1\n2,2\n3,4\n");
  const Outcome e = run({"foci", "--data", neg, "--y", "y"});
  REQUIRE(e.code == 0);
  CHECK(e.report()["results"]["selected"].empty());
  CHECK(e.report()["results"]["ordering"] == json::array({"x1"}));
  CHECK(e.report()["results"]["stop_cause"] == "nonpositive_gain");

  const auto wide = scratch("foci_wide.csv").string();
  REQUIRE(run({"sim", "--model", "interaction", "--n", "1000", "--p", "8", "--seed", "2", "--out", wide}).code == 0);
  const Outcome a = run({"foci", "--data", wide, "--y", "y", "--threads", "1", "--max-steps", "2"});
  const Outcome b = run({"foci", "--data", wide, "--y", "y", "--threads", "3", "--max-steps", "2"});
  REQUIRE(a.code == 0);
  CHECK(a.report()["results"].dump() == b.report()["results"].dump());
  CHECK(a.report()["results"]["selected"].size() <= 2);
  CHECK(run({"foci", "--data", wide, "--y", "y", "--no-standardize"}).code == 0);
  CHECK(run({"foci", "--data", wide, "--y", "y", "--threads", "0"}).code == 2);
}

TEST_CASE("bench smoke runs with few replications") {
  const Outcome a = run({"bench", "--experiment", "ex81", "--reps", "3", "--seed", "1"});
  REQUIRE(a.code == 0);
  const json r = a.report()["results"];
  CHECK(r.contains("pass"));
  CHECK(r["conditional"]["count"] == 3);

  const auto joint = write_file("joint.json",
                                R"({"atoms":[{"y":0,"x":[],"z":[0],"p":0.5},{"y":1,"x":[],"z":[1],"p":0.5}]})");
  const Outcome c = run({"bench", "--experiment", "consistency", "--reps", "2", "--joint", joint});
  REQUIRE(c.code == 0);
  CHECK(c.report()["results"]["tables"][0]["exact_t"].get<double>() == 1.0);
}
