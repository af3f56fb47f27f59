#include <chrono>
#include <cstdio>
#include <map>
#include <string>

#include "bfcalc/suites.hpp"

using namespace bfcalc;

namespace {

struct Run {
  SuiteResult result;
  double seconds;
};

Run timed(const std::string& suite, int threads = 0) {
  SuiteConfig cfg;
  cfg.suite = suite;
  cfg.seed = 42;
  cfg.threads = threads;
  const auto t0 = std::chrono::steady_clock::now();
  Run r{run_suite(cfg), 0.0};
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

long count_ids(const Json& report, const std::string& prefix) {
  long n = 0;
  for (const auto& c : report["checks"])
    if (c["id"].get<std::string>().rfind(prefix, 0) == 0) ++n;
  return n;
}

long min_samples(const Json& report) {
  long m = -1;
  for (const auto& c : report["checks"]) {
    const long s = c["samples"];
    if (m < 0 || s < m) m = s;
  }
  return m;
}

bool line(int k, bool ok, const std::string& what, const Run& r, double limit, const std::string& extra = "") {
  const auto& s = r.result.report["summary"];
  const bool in_time = r.seconds <= limit;
  const bool pass = ok && in_time && r.result.exit_code == 0;
  std::printf("criterion %d: %s  %s: %ld/%ld checks pass, worst margin %.3g%s, %.1f s (limit %.0f s)\n", k,
              pass ? "PASS" : "FAIL", what.c_str(), s["pass"].get<long>(), s["checks"].get<long>(),
              s["worst_margin"].is_null() ? 0.0 : s["worst_margin"].get<double>(), extra.c_str(), r.seconds, limit);
  return pass;
}

}  // namespace

int main() {
  bool all = true;
  std::map<std::string, std::string> first;

  auto r1 = timed("scalar-inequalities");
  first["scalar-inequalities"] = r1.result.report.dump();
  {
    const auto& rep = r1.result.report;
    long ids = 0;
    for (const auto& id : inequality_ids()) ids += count_ids(rep, id) == 200;
    const bool ok = ids == long(inequality_ids().size()) && min_samples(rep) >= 2048;
    all &= line(1, ok, "scalar inequalities", r1, 60.0, ", min samples " + std::to_string(min_samples(rep)));
  }

  auto r2 = timed("contour-bounds");
  first["contour-bounds"] = r2.result.report.dump();
  all &= line(2, count_ids(r2.result.report, "CONTOUR") == 50, "contour bound", r2, 120.0);

  auto r3 = timed("calculi-compat");
  first["calculi-compat"] = r3.result.report.dump();
  {
    const auto& rep = r3.result.report;
    const bool ok = count_ids(rep, "COMPAT/sqrt") == 30 && count_ids(rep, "COMPAT/log1p") == 30 &&
                    count_ids(rep, "COMPAT/one_minus_exp") == 30;
    all &= line(3, ok, "calculus compatibility", r3, 120.0);
  }

  auto r4 = timed("resolvent-identity");
  first["resolvent-identity"] = r4.result.report.dump();
  {
    const auto& rep = r4.result.report;
    const bool ok = count_ids(rep, "RESOLVENT") == 30 && count_ids(rep, "FIXTURE") == 2;
    all &= line(4, ok, "resolvent identity", r4, 180.0);
  }

  auto r5 = timed("sectoriality-constants");
  first["sectoriality-constants"] = r5.result.report.dump();
  {
    long ids = 0;
    for (const auto& id : bound_suite_ids()) ids += count_ids(r5.result.report, id) == 20;
    all &= line(5, ids == long(bound_suite_ids().size()), "explicit constants", r5, 300.0);
  }

  auto r6 = timed("subordination");
  first["subordination"] = r6.result.report.dump();
  {
    const auto& rep = r6.result.report;
    bool ok = count_ids(rep, "GAMMA-POWER") > 0;
    for (const char* f : {"gamma", "stable_half", "poisson"})
      ok = ok && count_ids(rep, std::string("LAPLACE/") + f) == 1 && count_ids(rep, std::string("MATRIX/") + f) > 0;
    all &= line(6, ok, "subordination", r6, 120.0);
  }

  auto r7 = timed("cm-appendix");
  first["cm-appendix"] = r7.result.report.dump();
  {
    long violations = 0;
    for (const auto& c : r7.result.report["checks"]) violations += c["constants"].contains("violation_k");
    all &= line(7, violations == 0, "complete monotonicity", r7, 60.0,
                ", violations " + std::to_string(violations));
  }

  // second pass on one worker thread
  const auto t0 = std::chrono::steady_clock::now();
  long same = 0;
  for (const auto& [suite, dump] : first) same += timed(suite, 1).result.report.dump() == dump;
  const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool det = same == long(first.size());
  std::printf("criterion 8: %s  determinism: %ld/%zu suites byte-identical on rerun with one thread, %.1f s\n",
              det ? "PASS" : "FAIL", same, first.size(), sec);
  all &= det;
  return all ? 0 : 1;
}
