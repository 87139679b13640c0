#pragma once

// Verification suites and their reports.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "symmcal/check.hpp"

namespace symmcal {

inline constexpr const char* kToolVersion = "1.0.0";

struct SuiteConfig {
  std::string suite = "all";  ///< rearrangement | geometry | pde | manifold | all
  int dim = 2;
  std::size_t size = 64;
  int trials = 20;
  std::uint64_t seed = 7;
  double tol_scale = 1.0;
  std::string out;
  std::string format = "json";
  /// Worker count; 0 reads SYMMCAL_THREADS (default 1).
  int threads = 0;

  void validate() const;
};

struct VerificationReport {
  std::string tool_version = kToolVersion;
  SuiteConfig config;
  std::vector<CheckResult> checks;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t unjudged = 0;
  double wall_time_s = 0.0;

  bool all_passed() const { return failed == 0; }
  void tally();
};

const std::vector<std::string>& suite_names();

VerificationReport run_suite(const SuiteConfig& cfg);

/// Multiplies every judged tolerance and recomputes the verdicts.
void apply_tol_scale(std::vector<CheckResult>& checks, double scale);

std::string report_to_json(const VerificationReport& r);
VerificationReport report_from_json(const std::string& text);

std::string report_to_csv(const VerificationReport& r);
void emit_csv(const VerificationReport& r, const std::string& path);

/// Runs tasks on `threads` workers and concatenates their results in task
/// order.
std::vector<CheckResult> run_tasks(const std::vector<std::function<std::vector<CheckResult>()>>& tasks,
                                   int threads);
int threads_from_env();

/// Rearranges a radial annulus profile on a 2-D grid and on phi(r) = r
/// shells; every grid value must fall within the range of the shell holding
/// its radius and that shell's neighbours.
CheckResult euclidean_emulation_check(std::size_t size);

}  // namespace symmcal
