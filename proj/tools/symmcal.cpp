#include <cstdio>
#include <iostream>
#include <regex>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "symmcal/inequalities.hpp"
#include "symmcal/io.hpp"
#include "symmcal/manifold.hpp"
#include "symmcal/pde.hpp"
#include "symmcal/perimeter.hpp"
#include "symmcal/random.hpp"
#include "symmcal/rearrange.hpp"
#include "symmcal/suite.hpp"
#include "symmcal/generators.hpp"

using namespace symmcal;
using nlohmann::json;

namespace {

// Exit codes.
constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Opts {
  std::string in, out, method = "minkowski", delta = "4h", f, omega, grid, format = "json", suite = "all";
  std::uint64_t seed = 7;
  int dim = 2, trials = 20;
  std::size_t size = 64;
  double tol_scale = 1.0;
};

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) std::cout << text;
  else write_text(path, text);
}

int emit_report(const VerificationReport& r, const Opts& o) {
  emit(o.format == "csv" ? report_to_csv(r) : report_to_json(r), o.out);
  std::fprintf(stderr, "%zu checks: %zu passed, %zu failed, %zu unjudged (%.1f s)\n", r.checks.size(), r.passed,
               r.failed, r.unjudged, r.wall_time_s);
  return r.all_passed() ? kPass : kFail;
}

/// "0.05" or "4h" (multiples of the mean spacing).
double parse_delta(const std::string& s, const Grid& g) {
  static const std::regex re(R"(^\s*([0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*(h?)\s*$)");
  std::smatch m;
  if (!std::regex_match(s, m, re)) throw std::invalid_argument("bad --delta: " + s);
  const double v = std::stod(m[1].str());
  return m[2].length() > 0 ? v * g.mean_spacing() : v;
}

bool looks_like_mask(const std::string& text) {
  const json j = json::parse(text, nullptr, false);
  return j.is_object() && j.contains("members");
}

int cmd_rearrange(const Opts& o) {
  const std::string text = read_text(o.in);
  if (looks_like_mask(text)) emit(mask_to_json(rearrange_mask(mask_from_json(text))) + "\n", o.out);
  else emit(field_to_json(rearrange_field(field_from_json(text))) + "\n", o.out);
  return kPass;
}

int cmd_perimeter(const Opts& o) {
  const RegionMask a = read_mask(o.in);
  const PerimeterMethod m = parse_perimeter_method(o.method);
  PerimeterEstimate e{};
  switch (m) {
    case PerimeterMethod::FaceCount: e = perimeter_face_count(a); break;
    case PerimeterMethod::Minkowski: e = perimeter_minkowski(a, parse_delta(o.delta, a.grid)); break;
    case PerimeterMethod::Convolution: e = perimeter_convolution(a, parse_delta(o.delta, a.grid)); break;
    case PerimeterMethod::SmoothedGradient:
      e = perimeter_smoothed_gradient(a, parse_delta(o.delta, a.grid));
      break;
  }
  emit(json{{"method", to_string(e.method)}, {"value", e.value}, {"parameter", e.parameter}, {"volume", volume(a)}}
               .dump(2) + "\n",
       o.out);
  return kPass;
}

int cmd_poisson(const Opts& o) {
  const PoissonSolution s = solve_poisson(read_field(o.f), read_mask(o.omega));
  json j = json::parse(field_to_json(s.u));
  j["residual"] = s.residual_norm;
  j["iterations"] = s.iterations;
  emit(j.dump() + "\n", o.out);
  return kPass;
}

int cmd_eigen(const Opts& o) {
  const EigenResult e = smallest_dirichlet_eigenvalue(read_mask(o.omega));
  json j{{"lambda1", e.lambda1}, {"residual", e.residual}, {"iterations", e.iterations}};
  if (!o.out.empty()) j["eigenfield"] = json::parse(field_to_json(e.eigenfield));
  std::printf("%.12g\n", e.lambda1);
  if (!o.out.empty()) write_text(o.out, j.dump() + "\n");
  return kPass;
}

int cmd_manifold_rearrange(const Opts& o) {
  auto g = std::make_shared<const manifold::WeightedRadialGrid>(read_radial_grid(o.grid));
  std::vector<double> values;
  try {
    values = json::parse(read_text(o.in)).at("values").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw IoError(std::string("bad manifold field: ") + e.what());
  }
  const manifold::ManifoldField fs = manifold::rearrange_field_M(manifold::ManifoldField(g, std::move(values)));
  emit(json{{"values", fs.values}}.dump() + "\n", o.out);
  return kPass;
}

int cmd_manifold_verify(const Opts& o) {
  auto g = std::make_shared<const manifold::WeightedRadialGrid>(read_radial_grid(o.grid));
  VerificationReport r;
  r.config.suite = "manifold";
  r.config.seed = o.seed;
  r.config.trials = o.trials;
  r.config.tol_scale = o.tol_scale;
  for (int t = 0; t < o.trials; ++t) {
    const std::uint64_t seed = derive_seed(o.seed, static_cast<std::uint64_t>(t));
    Rng rng(seed);
    const auto f = random_manifold_field(g, rng);
    const auto h = random_manifold_field(g, rng);
    for (CheckResult c : {manifold::check_lp_M(f, 1.0), manifold::check_lp_M(f, 2.0),
                          manifold::check_hardy_littlewood_M(f, h), manifold::check_lp_contraction_M(f, h, 1.0),
                          manifold::coarea_M_check(f)}) {
      char tag[16];
      std::snprintf(tag, sizeof tag, "#%04d", t);
      c.name += tag;
      c.seed = seed;
      r.checks.push_back(std::move(c));
    }
  }
  std::sort(r.checks.begin(), r.checks.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  apply_tol_scale(r.checks, o.tol_scale);
  r.tally();
  return emit_report(r, o);
}

int cmd_verify(const Opts& o) {
  SuiteConfig cfg;
  cfg.suite = o.suite;
  cfg.dim = o.dim;
  cfg.size = o.size;
  cfg.trials = o.trials;
  cfg.seed = o.seed;
  cfg.tol_scale = o.tol_scale;
  cfg.out = o.out;
  cfg.format = o.format;
  cfg.validate();
  return emit_report(run_suite(cfg), o);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symmcal: symmetric rearrangement laboratory"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  Opts o;

  auto common = [&](CLI::App* c) {
    c->add_option("--out", o.out, "output path (stdout if omitted)");
    c->add_option("--seed", o.seed, "random seed");
    c->add_option("--format", o.format, "report format")->check(CLI::IsMember({"json", "csv"}));
    c->add_option("--tol-scale", o.tol_scale, "multiplies every default tolerance")->check(CLI::PositiveNumber);
  };

  auto* rearr = app.add_subcommand("rearrange", "rearrange a field or mask");
  rearr->add_option("--in", o.in, "field or mask JSON")->required();
  common(rearr);

  auto* per = app.add_subcommand("perimeter", "estimate the perimeter of a mask");
  per->add_option("--in", o.in, "mask JSON")->required();
  per->add_option("--method", o.method, "face_count | smoothed_gradient | minkowski | convolution");
  per->add_option("--delta", o.delta, "radius or width, absolute or in cells (e.g. 4h)");
  common(per);

  auto* poi = app.add_subcommand("poisson", "solve -lap u = f in omega, u = 0 outside");
  poi->add_option("--f", o.f, "source field JSON")->required();
  poi->add_option("--omega", o.omega, "domain mask JSON")->required();
  common(poi);

  auto* eig = app.add_subcommand("eigen", "smallest Dirichlet eigenvalue of a mask");
  eig->add_option("--omega", o.omega, "domain mask JSON")->required();
  common(eig);

  auto* man = app.add_subcommand("manifold", "weighted radial manifolds");
  man->require_subcommand(1);
  auto* man_r = man->add_subcommand("rearrange", "rearrange a field on a radial grid");
  man_r->add_option("--grid", o.grid, "radial grid JSON")->required();
  man_r->add_option("--in", o.in, "field JSON with \"values\"")->required();
  common(man_r);
  auto* man_v = man->add_subcommand("verify", "random property checks on a radial grid");
  man_v->add_option("--grid", o.grid, "radial grid JSON")->required();
  man_v->add_option("--trials", o.trials)->check(CLI::PositiveNumber);
  common(man_v);

  auto* ver = app.add_subcommand("verify", "run a verification suite");
  ver->add_option("--suite", o.suite, "rearrangement | geometry | pde | manifold | all");
  ver->add_option("--n", o.dim, "dimension");
  ver->add_option("--size", o.size, "cells per axis");
  ver->add_option("--trials", o.trials, "seeded trials per randomized check");
  common(ver);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }

  try {
    if (*rearr) return cmd_rearrange(o);
    if (*per) return cmd_perimeter(o);
    if (*poi) return cmd_poisson(o);
    if (*eig) return cmd_eigen(o);
    if (*man_r) return cmd_manifold_rearrange(o);
    if (*man_v) return cmd_manifold_verify(o);
    if (*ver) return cmd_verify(o);
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const SolverError& e) {
    std::fprintf(stderr, "solver failed: %s (residual %g after %d iterations)\n", e.what(), e.residual(),
                 e.iterations());
    return kFail;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kFail;
  }
  return kUsage;
}
