#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"
#include "symmcal/generators.hpp"
#include "symmcal/io.hpp"

using namespace symmcal;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " \"" + SYMMCAL_CLI + "\" " + args + " 2>/dev/null";
  Run r{0, {}};
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) r.out.append(buf, n);
  const int raw = pclose(p);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("symmcal_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run("").status == 2);
  CHECK(run("frobnicate").status == 2);
  CHECK(run("verify --suite nonsense").status == 2);
  CHECK(run("verify --trials 0").status == 2);
  CHECK(run("verify --format xml").status == 2);
  CHECK(run("rearrange --in /nonexistent/f.json").status == 2);
  CHECK(run("--help").status == 0);
  CHECK(run("--version").out.find("1.0.0") != std::string::npos);
}

TEST_CASE("rearrange, perimeter, eigen and poisson subcommands") {
  TempDir dir;
  const Grid g = Grid::cube(2, 48, 2.0);
  const RegionMask sq = rectangle_mask(g, 0.3, 0.1, 1.0, 1.0);
  write_text(dir / "sq.json", mask_to_json(sq));

  REQUIRE(run("rearrange --in " + (dir / "sq.json") + " --out " + (dir / "sq_star.json")).status == 0);
  const RegionMask star = read_mask(dir / "sq_star.json");
  CHECK(star.count() == sq.count());

  const Run per = run("perimeter --in " + (dir / "sq.json") + " --method minkowski --delta 4h");
  REQUIRE(per.status == 0);
  const json pj = json::parse(per.out);
  CHECK(pj["method"] == "minkowski");
  CHECK(pj["value"].get<double>() == doctest::Approx(4.0).epsilon(0.06));
  CHECK(pj["parameter"].get<double>() == doctest::Approx(4.0 * g.spacing()[0]));
  CHECK(run("perimeter --in " + (dir / "sq.json") + " --method face_count").status == 0);
  CHECK(run("perimeter --in " + (dir / "sq.json") + " --method minkowski --delta 1h").status == 2);
  CHECK(run("perimeter --in " + (dir / "sq.json") + " --method bogus").status == 2);

  const Run eig = run("eigen --omega " + (dir / "sq.json"));
  REQUIRE(eig.status == 0);
  // 24 member cells per side: the Dirichlet walls sit 25 cells apart
  const double side = 25.0 * g.spacing()[0];
  CHECK(std::stod(eig.out) == doctest::Approx(19.7392 / (side * side)).epsilon(0.01));

  ScalarField f(g);
  for (std::size_t i = 0; i < f.size(); ++i) f.values[i] = sq.members[i] ? 1.0 : 0.0;
  write_text(dir / "f.json", field_to_json(f));
  REQUIRE(run("poisson --f " + (dir / "f.json") + " --omega " + (dir / "sq.json") + " --out " + (dir / "u.json")).status == 0);
  const ScalarField u = read_field(dir / "u.json");
  CHECK(u.max() > 0.0);
  CHECK(u.max() == doctest::Approx(0.07367 * side * side).epsilon(0.02));  // torsion function of a square
}

TEST_CASE("manifold subcommands") {
  TempDir dir;
  const manifold::WeightedRadialGrid rg({0.0, 0.5, 1.0, 1.5}, {0.25, 0.75, 1.25}, 2.0);
  write_text(dir / "g.json", radial_grid_to_json(rg));
  write_text(dir / "v.json", R"({"values":[0.1,0.7,0.3]})");
  const Run r = run("manifold rearrange --grid " + (dir / "g.json") + " --in " + (dir / "v.json"));
  REQUIRE(r.status == 0);
  CHECK(json::parse(r.out)["values"].get<std::vector<double>>() == std::vector<double>{0.7, 0.7, 0.3});
  const Run v = run("manifold verify --grid " + (dir / "g.json") + " --trials 5");
  CHECK(v.status == 0);
  CHECK(json::parse(v.out)["summary"]["failed"] == 0);
}

TEST_CASE("verify emits JSON or CSV and honours the exit contract") {
  TempDir dir;
  const Run j = run("verify --suite rearrangement --size 32 --trials 4 --seed 11");
  REQUIRE(j.status == 0);
  const json rep = json::parse(j.out);
  CHECK(rep["config"]["seed"] == 11);
  CHECK(rep["summary"]["failed"] == 0);
  for (const auto& c : rep["checks"]) CHECK(c.contains("tol"));

  REQUIRE(run("verify --suite manifold --size 32 --trials 2 --format csv --out " + (dir / "r.csv")).status == 0);
  std::ifstream in(dir / "r.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "name,lhs,rhs,slack,tol,pass");

  // a vanishing tolerance turns within-band discrepancies into failures
  CHECK(run("verify --suite geometry --size 32 --trials 2 --tol-scale 1e-300").status == 1);
}

TEST_CASE("backend pinning and worker count") {
  const std::string args = "verify --suite rearrangement --size 32 --trials 4";
  const Run scalar = run(args, "SYMMCAL_SIMD=scalar");
  const Run native = run(args);
  REQUIRE(scalar.status == 0);
  REQUIRE(native.status == 0);
  const json a = json::parse(scalar.out), b = json::parse(native.out);
  REQUIRE(a["checks"].size() == b["checks"].size());
  for (std::size_t i = 0; i < a["checks"].size(); ++i) {
    CHECK(a["checks"][i]["name"] == b["checks"][i]["name"]);
    CHECK(a["checks"][i]["pass"] == b["checks"][i]["pass"]);
    const double x = a["checks"][i]["lhs"], y = b["checks"][i]["lhs"];
    CHECK(std::abs(x - y) <= 1e-9 * std::max(1.0, std::abs(y)));
  }
  json threaded = json::parse(run(args, "SYMMCAL_THREADS=4").out);
  json serial = b;
  threaded.erase("wall_time_s");
  serial.erase("wall_time_s");
  CHECK(threaded == serial);
}
