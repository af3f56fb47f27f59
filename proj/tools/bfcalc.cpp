#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "bfcalc/suites.hpp"

namespace {

bool write_file(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return bool(std::cout);
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  return bool(out);
}

int run(const std::string& suite, std::uint64_t seed, const std::string& config_path, const std::string& out_path,
        double tol_scale, bool timing, int threads) {
  bfcalc::SuiteConfig cfg;
  cfg.suite = suite;
  cfg.seed = seed;
  cfg.tol_scale = tol_scale;
  cfg.timing = timing;
  cfg.threads = threads;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "bfcalc: cannot read config " << config_path << "\n";
      return 2;
    }
    try {
      cfg.config = bfcalc::Json::parse(in);
    } catch (const std::exception& e) {
      std::cerr << "bfcalc: invalid config: " << e.what() << "\n";
      return 2;
    }
  }
  const auto res = bfcalc::run_suite_safe(cfg);
  if (res.exit_code == 2) std::cerr << "bfcalc: " << res.report.value("error", std::string("invalid spec")) << "\n";
  if (!write_file(out_path, res.report.dump(2) + "\n")) {
    std::cerr << "bfcalc: cannot write " << out_path << "\n";
    return 2;
  }
  if (res.exit_code != 2) {
    const auto& s = res.report.at("summary");
    std::cerr << suite << ": " << s.at("pass").get<long>() << " pass, " << s.at("fail").get<long>() << " fail";
    if (s.at("quadrature_failures").get<long>() > 0)
      std::cerr << ", " << s.at("quadrature_failures").get<long>() << " quadrature failures";
    std::cerr << "\n";
  }
  return res.exit_code;
}

int plot(const std::string& report_path, const std::string& kind, const std::string& out_path) {
  std::ifstream in(report_path);
  if (!in) {
    std::cerr << "bfcalc: cannot read report " << report_path << "\n";
    return 2;
  }
  try {
    const auto report = bfcalc::Json::parse(in);
    if (!write_file(out_path, bfcalc::emit_plotdata(report, kind))) {
      std::cerr << "bfcalc: cannot write " << out_path << "\n";
      return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "bfcalc: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bernstein-function calculus checks"};
  app.require_subcommand(1);

  std::string suite, config, out = "-", report, kind;
  std::uint64_t seed = 0;
  double tol_scale = 1.0;
  bool timing = false;
  int threads = 0;

  auto* r = app.add_subcommand("run", "run a named suite and write its JSON report");
  r->add_option("--suite", suite, "suite id")->required()->check(CLI::IsMember(bfcalc::suite_ids()));
  r->add_option("--seed", seed, "64-bit seed");
  r->add_option("--config", config, "JSON config file");
  r->add_option("--out", out, "report path, - for stdout");
  r->add_option("--tol-scale", tol_scale, "multiplies every check tolerance")->check(CLI::PositiveNumber);
  r->add_flag("--timing", timing, "add wall-clock timings to the report");
  r->add_option("--threads", threads, "worker threads, 0 for all cores")->check(CLI::NonNegativeNumber);

  auto* p = app.add_subcommand("plot", "extract plot data from a report as CSV");
  p->add_option("--report", report, "report path")->required();
  p->add_option("--kind", kind, "margin-vs-|z|, ratio-table or density-profile")->required();
  p->add_option("--out", out, "CSV path, - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (r->parsed()) return run(suite, seed, config, out, tol_scale, timing, threads);
  return plot(report, kind, out);
}
