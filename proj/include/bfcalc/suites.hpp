#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bfcalc/io.hpp"

namespace bfcalc {

// mt19937_64 with explicit mappings, so draws do not depend on the standard library's distributions
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  double uniform() { return double(g_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  double log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }
  int integer(int lo, int hi) { return lo + int(uniform() * (hi - lo + 1)); }
  // Box-Muller
  double normal();

 private:
  std::mt19937_64 g_;
};

// a, b in [0, 1] (each zero with probability 1/4), 1-4 atoms at log-uniform locations in [1e-2, 1e2] with masses in
// [1e-2, 1], and with probability 1/2 a density C s^q e^{-r s} on (0, inf).
BernsteinFn random_bernstein(Rng& rng);
// U diag(l) U* with |l| log-uniform in [rmin, rmax] and |arg l| <= half_angle
Matrix random_normal_matrix(Rng& rng, Index n, double half_angle, double rmin, double rmax);
// Q T Q* with T upper triangular, same spectrum law, off-diagonal entries of size ~ coupling
Matrix random_nonnormal_matrix(Rng& rng, Index n, double half_angle, double rmin, double rmax, double coupling);

struct SuiteConfig {
  std::string suite;
  std::uint64_t seed = 0;
  Json config = Json::object();
  double tol_scale = 1.0;
  bool timing = false;
  int threads = 0;  // 0: hardware concurrency
};

struct SuiteResult {
  Json report;
  int exit_code = 0;  // 0 pass, 1 check failure, 2 invalid spec, 3 quadrature failure
};

const std::vector<std::string>& suite_ids();
// Throws SpecError for an unknown suite or malformed config.
SuiteResult run_suite(const SuiteConfig& cfg);
// Catches SpecError and reports it with exit code 2.
SuiteResult run_suite_safe(const SuiteConfig& cfg);

// kinds: margin-vs-|z|, ratio-table, density-profile. Throws SpecError for an unknown kind or a missing table.
const std::vector<std::string>& plot_kinds();
std::string emit_plotdata(const Json& report, const std::string& kind);

}  // namespace bfcalc
