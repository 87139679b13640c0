#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "symmcal/generators.hpp"
#include "symmcal/io.hpp"
#include "symmcal/suite.hpp"

using namespace symmcal;

namespace {

SuiteConfig small(const std::string& suite) {
  SuiteConfig c;
  c.suite = suite;
  c.size = 32;
  c.trials = 3;
  return c;
}

std::string without_wall_time(const VerificationReport& r) {
  VerificationReport copy = r;
  copy.wall_time_s = 0.0;
  return report_to_json(copy);
}

}  // namespace

TEST_CASE("config validation") {
  SuiteConfig c;
  CHECK_NOTHROW(c.validate());
  c.suite = "everything";
  CHECK_THROWS(c.validate());
  c = SuiteConfig{};
  c.trials = 0;
  CHECK_THROWS(c.validate());
  c = SuiteConfig{};
  c.format = "xml";
  CHECK_THROWS(c.validate());
}

TEST_CASE("rearrangement suite at size 32 with 50 trials has no failures") {
  SuiteConfig c = small("rearrangement");
  c.trials = 50;
  const VerificationReport r = run_suite(c);
  CHECK(r.failed == 0);
  CHECK(r.passed + r.failed + r.unjudged == r.checks.size());
}

TEST_CASE("each suite runs and is deterministic") {
  for (const char* s : {"rearrangement", "geometry", "manifold"}) {
    CAPTURE(s);
    const VerificationReport a = run_suite(small(s));
    const VerificationReport b = run_suite(small(s));
    CHECK(a.failed == 0);
    CHECK(without_wall_time(a) == without_wall_time(b));
    for (std::size_t i = 1; i < a.checks.size(); ++i) CHECK(a.checks[i - 1].name <= a.checks[i].name);
  }
}

TEST_CASE("thread count does not change the report") {
  SuiteConfig c = small("manifold");
  c.threads = 1;
  const auto one = run_suite(c);
  c.threads = 4;
  const auto four = run_suite(c);
  CHECK(without_wall_time(one) == without_wall_time(four));
}

TEST_CASE("report JSON round-trips") {
  const VerificationReport r = run_suite(small("rearrangement"));
  const VerificationReport back = report_from_json(report_to_json(r));
  CHECK(back.checks == r.checks);
  CHECK(back.passed == r.passed);
  CHECK(back.config.seed == r.config.seed);
  CHECK(report_to_json(back) == report_to_json(r));
  CHECK_THROWS_AS(report_from_json("{"), IoError);
}

TEST_CASE("tolerance scaling") {
  std::vector<CheckResult> v{make_check("a", 1, 1, -0.5, 0.4), make_unjudged("b", 0, 0, -9.0)};
  CHECK_FALSE(v[0].pass);
  apply_tol_scale(v, 2.0);
  CHECK(v[0].pass);
  CHECK(v[0].tol == 0.8);
  CHECK(v[1].pass);
  apply_tol_scale(v, 0.1);
  CHECK_FALSE(v[0].pass);
}

TEST_CASE("CSV emission") {
  VerificationReport r;
  CHECK(report_to_csv(r) == "name,lhs,rhs,slack,tol,pass\n");
  r.checks = {make_check("x", 1, 2, 1, 0), make_check("y", 2, 1, -1, 0), make_check("z", 0, 0, 0, 0)};
  r.tally();
  const std::string csv = report_to_csv(r);
  std::istringstream in(csv);
  std::string line;
  int lines = 0, passed = 0;
  std::getline(in, line);
  while (std::getline(in, line)) {
    ++lines;
    passed += line.back() == '1';
  }
  CHECK(lines == 3);
  CHECK(static_cast<std::size_t>(passed) == r.passed);
  const auto path = std::filesystem::temp_directory_path() / "symmcal_test.csv";
  emit_csv(r, path.string());
  CHECK(read_text(path.string()) == csv);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(emit_csv(r, "/nonexistent-dir/x.csv"), IoError);
}

TEST_CASE("Euclidean emulation within one shell") { CHECK(euclidean_emulation_check(65).pass); }

TEST_CASE("io round trips") {
  const Grid g({3, 2}, {0.5, 0.25}, {1.0, -1.0});
  const ScalarField f(g, {1, 2, 3, 4, 5, 6});
  const ScalarField f2 = field_from_json(field_to_json(f));
  CHECK(f2.grid == g);
  CHECK(f2.values == f.values);
  const RegionMask m(g, {0, 1, 1, 0, 0, 1});
  CHECK(mask_from_json(mask_to_json(m)) == m);
  CHECK_THROWS_AS(mask_from_json(R"({"dim":1,"shape":[2],"spacing":[1],"members":[0,2]})"), IoError);
  CHECK_THROWS_AS(field_from_json(R"({"dim":2,"shape":[2],"spacing":[1],"values":[0,2]})"), IoError);
  const Polygon p{{{0, 0}, {1, 0}, {0, 1}}};
  CHECK(polygon_from_json(polygon_to_json(p)).vertices == p.vertices);
  CHECK(polygon_from_json("[[0,0],[1,0],[0,1]]").vertices == p.vertices);
  const manifold::WeightedRadialGrid rg({0.0, 0.5, 1.0}, {1.0, 2.0}, 2.0, {0.5, 1.5});
  CHECK(radial_grid_from_json(radial_grid_to_json(rg)) == rg);
  CHECK_THROWS_AS(read_text("/nonexistent/file.json"), IoError);
}
