#include "bfcalc/suites.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <Eigen/QR>

#include "bfcalc/cm_test.hpp"

namespace bfcalc {

double Rng::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
}

BernsteinFn random_bernstein(Rng& rng) {
  LevyTriple t;
  t.a = rng.uniform() < 0.25 ? 0.0 : rng.uniform();
  t.b = rng.uniform() < 0.25 ? 0.0 : rng.uniform();
  std::vector<Atom> atoms;
  const int na = rng.integer(1, 4);
  for (int i = 0; i < na; ++i) atoms.push_back({rng.log_uniform(1e-2, 1e2), rng.uniform(1e-2, 1.0)});
  t.mu = RadonMeasure(atoms, {});
  if (rng.uniform() < 0.5) {
    const double coef = rng.uniform(0.05, 1.0), q = rng.uniform(-1.8, -0.2), r = rng.uniform(0.2, 3.0);
    t.mu = t.mu + RadonMeasure::from_term(0.0, inf, {coef, q, r});
  }
  return BernsteinFn::levy(t);
}

namespace {

Matrix random_unitary(Rng& rng, Index n) {
  Matrix g(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < n; ++k) g(i, k) = Complex(rng.normal(), rng.normal());
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(n, n);
}

Vector random_spectrum(Rng& rng, Index n, double half_angle, double rmin, double rmax) {
  Vector d(n);
  for (Index i = 0; i < n; ++i) d(i) = std::polar(rng.log_uniform(rmin, rmax), rng.uniform(-half_angle, half_angle));
  return d;
}

}  // namespace

Matrix random_normal_matrix(Rng& rng, Index n, double half_angle, double rmin, double rmax) {
  const Vector d = random_spectrum(rng, n, half_angle, rmin, rmax);
  const Matrix U = random_unitary(rng, n);
  return U * d.asDiagonal() * U.adjoint();
}

Matrix random_nonnormal_matrix(Rng& rng, Index n, double half_angle, double rmin, double rmax, double coupling) {
  Matrix T = random_spectrum(rng, n, half_angle, rmin, rmax).asDiagonal();
  for (Index i = 0; i < n; ++i)
    for (Index k = i + 1; k < n; ++k) T(i, k) = coupling * Complex(rng.normal(), rng.normal());
  const Matrix U = random_unitary(rng, n);
  return U * T * U.adjoint();
}

namespace {

struct Task {
  std::string id;
  int index;
  std::function<CheckReport()> run;
};

struct Outcome {
  std::string id;
  int index;
  CheckReport rep;
  bool quadrature_failure = false;
};

struct Suite {
  std::vector<Task> tasks;
  Json tables = Json::object();
};

std::vector<Outcome> run_tasks(const std::vector<Task>& tasks, int threads) {
  std::vector<Outcome> out(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      Outcome& o = out[i];
      o.id = tasks[i].id;
      o.index = tasks[i].index;
      try {
        o.rep = tasks[i].run();
      } catch (const QuadratureError& e) {
        o.rep = CheckReport{};
        o.rep.worst_margin = -inf;
        o.rep.note = std::string("quadrature failure: ") + e.what();
        o.rep.constants["achieved"] = e.achieved();
        o.quadrature_failure = true;
      } catch (const std::exception& e) {
        o.rep = CheckReport{};
        o.rep.worst_margin = -inf;
        o.rep.note = std::string("error: ") + e.what();
      }
      o.rep.id = o.id;
      if (o.quadrature_failure || o.rep.note.rfind("error: ", 0) == 0)
        o.rep.pass = false;
      else
        o.rep.finalize();
    }
  };
  int n = threads > 0 ? threads : int(std::max(1u, std::thread::hardware_concurrency()));
  n = std::min<int>(n, int(std::max<std::size_t>(1, tasks.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::stable_sort(out.begin(), out.end(), [](const Outcome& a, const Outcome& b) {
    return a.id != b.id ? a.id < b.id : a.index < b.index;
  });
  return out;
}

// config access

const std::set<std::string> config_keys = {"draws", "radii", "angles", "psi", "matrix", "z", "family", "omega"};

int config_int(const Json& c, const std::string& key, int fallback, int lo, int hi) {
  if (!c.contains(key)) return fallback;
  if (!c.at(key).is_number_integer()) throw SpecError("config: \"" + key + "\" must be an integer");
  const long long v = c.at(key).get<long long>();
  if (v < lo || v > hi)
    throw SpecError("config: \"" + key + "\" out of [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return int(v);
}

std::vector<Complex> config_zs(const Json& c) {
  const Json& z = c.at("z");
  if (z.is_array() && !z.empty() && z[0].is_array()) {
    std::vector<Complex> out;
    for (const auto& x : z) out.push_back(parse_complex(x));
    return out;
  }
  return {parse_complex(z)};
}

std::vector<double> grid16() {
  std::vector<double> g;
  for (int i = 0; i < 16; ++i) g.push_back(std::pow(10.0, -2.0 + 4.0 * i / 15.0));
  return g;
}

double rel_err(const Matrix& a, const Matrix& b) { return spectral_norm(a - b) / std::max(1e-300, spectral_norm(b)); }

CheckReport error_report(const std::string& id, double err, double tol) {
  CheckReport r;
  r.id = id;
  r.samples = 1;
  r.tolerance = tol;
  r.worst_margin = -err;
  r.finalize();
  return r;
}

Json table(std::vector<std::string> columns, const std::vector<std::vector<double>>& rows) {
  Json j;
  j["columns"] = columns;
  Json r = Json::array();
  for (const auto& row : rows) {
    Json x = Json::array();
    for (double v : row) x.push_back(std::isfinite(v) ? Json(v) : Json(nullptr));
    r.push_back(x);
  }
  j["rows"] = r;
  return j;
}

// suites

Suite scalar_inequalities(const SuiteConfig& cfg, Rng& rng) {
  const Json& c = cfg.config;
  const int draws = config_int(c, "draws", 200, 1, 100000);
  SamplingPlan plan;
  plan.radii = config_int(c, "radii", 64, 4, 4096);
  plan.angles = config_int(c, "angles", 32, 2, 4096);
  plan.tolerance = 1e-9 * cfg.tol_scale;
  std::vector<BernsteinFn> fns;
  if (c.contains("psi"))
    fns.push_back(parse_psi(c.at("psi")));
  else
    for (int i = 0; i < draws; ++i) fns.push_back(random_bernstein(rng));
  Suite s;
  for (std::size_t i = 0; i < fns.size(); ++i)
    for (const auto& id : inequality_ids())
      s.tasks.push_back({id, int(i), [psi = fns[i], id, plan] {
                           auto r = check_inequality(id, psi, plan);
                           r.note = psi.describe();
                           return r;
                         }});
  const auto probe = BernsteinFn::sum({BernsteinFn::power(0.5), BernsteinFn::log1p()});
  std::vector<double> rs;
  for (int k = 0; k <= 8; ++k) rs.push_back(std::pow(10.0, k));
  std::vector<std::vector<double>> rows;
  for (const auto& r : fujita_ratio_probe(probe, 0.5, {pi / 8, pi / 4, 3 * pi / 8}, rs))
    rows.push_back({r.r, r.theta, r.ratio.real(), r.ratio.imag()});
  s.tables["ratio-table"] = table({"r", "theta", "re_ratio", "im_ratio"}, rows);
  return s;
}

Suite contour_bounds(const SuiteConfig& cfg, Rng& rng) {
  const Json& c = cfg.config;
  const int draws = config_int(c, "draws", 50, 1, 100000);
  struct Draw {
    BernsteinFn psi;
    double omega, beta;
    Complex z;
  };
  std::vector<Draw> ds;
  if (c.contains("psi")) {
    const auto psi = parse_psi(c.at("psi"));
    const double omega = c.contains("omega") ? c.at("omega").get<double>() : 0.7 * pi;
    const auto zs = c.contains("z") ? config_zs(c) : std::vector<Complex>{1.0};
    for (Complex z : zs) ds.push_back({psi, omega, 0.5 * (pi - omega), z});
  } else {
    for (int i = 0; i < draws; ++i) {
      Draw d{random_bernstein(rng), 0.0, 0.0, 0.0};
      d.omega = rng.uniform(0.55, 0.95) * pi;
      d.beta = rng.uniform(0.1, 0.9) * (pi - d.omega);
      d.z = std::polar(rng.log_uniform(1e-2, 1e2), rng.uniform(-0.95, 0.95) * d.omega);
      ds.push_back(d);
    }
  }
  Suite s;
  const double tol = 1e-6 * cfg.tol_scale;
  for (std::size_t i = 0; i < ds.size(); ++i)
    s.tasks.push_back({"CONTOUR", int(i), [d = ds[i], tol] {
                         auto r = contour_bound_check(d.psi, d.z, d.omega, d.beta, tol);
                         CheckReport rep;
                         rep.samples = r.evaluations;
                         rep.tolerance = tol;
                         rep.worst_margin = r.margin;
                         rep.worst_z = d.z;
                         rep.constants = {{"abs_z", std::abs(d.z)}, {"integral", r.integral},
                                          {"truncation", r.truncation}, {"bound", r.bound},
                                          {"omega", d.omega}, {"beta", d.beta}};
                         rep.note = d.psi.describe();
                         return rep;
                       }});
  return s;
}

Suite calculi_compat(const SuiteConfig& cfg, Rng& rng) {
  const Json& c = cfg.config;
  const int draws = config_int(c, "draws", 30, 1, 10000);
  std::vector<Matrix> mats;
  if (c.contains("matrix"))
    mats.push_back(parse_matrix(c.at("matrix")));
  else
    for (int i = 0; i < draws; ++i)
      mats.push_back(random_normal_matrix(rng, rng.integer(2, 8), rng.uniform(0.0, 0.45 * pi), 0.1, 10.0));
  struct Named {
    std::string id;
    BernsteinFn psi;
    bool hirsch;
  };
  std::vector<Named> fns = {{"COMPAT/sqrt", BernsteinFn::power(0.5), true},
                            {"COMPAT/log1p", BernsteinFn::log1p(), true},
                            {"COMPAT/one_minus_exp", BernsteinFn::one_minus_exp(), false}};
  if (c.contains("psi")) {
    auto p = parse_psi(c.at("psi"));
    fns = {{"COMPAT/custom", p, bool(p.stieltjes())}};
  }
  Suite s;
  const double tol = 1e-6 * cfg.tol_scale;
  for (std::size_t i = 0; i < mats.size(); ++i)
    for (const auto& f : fns)
      s.tasks.push_back({f.id, int(i), [A = mats[i], f, tol] {
                           const auto S = make_sectorial(A);
                           const Matrix o = eigen_oracle([&](Complex z) { return f.psi(z); }, A);
                           CheckReport r;
                           r.samples = 1;
                           r.tolerance = tol;
                           const double el = rel_err(levy_apply(f.psi, S), o);
                           r.constants["levy_vs_oracle"] = el;
                           double worst = el;
                           if (f.hirsch) {
                             const double eh = rel_err(hirsch_apply(*f.psi.stieltjes(), S), o);
                             r.constants["hirsch_vs_oracle"] = eh;
                             worst = std::max(worst, eh);
                           }
                           r.constants["dim"] = double(A.rows());
                           r.constants["omega_hat"] = S.omega_hat();
                           r.worst_margin = -worst;
                           return r;
                         }});
  return s;
}

Suite resolvent_identity(const SuiteConfig& cfg, Rng& rng) {
  const Json& c = cfg.config;
  const int draws = config_int(c, "draws", 30, 1, 10000);
  const double tol = 1e-5 * cfg.tol_scale;
  struct Draw {
    std::string id;
    BernsteinFn psi;
    Matrix A;
    std::vector<Complex> zs;
    double omega;
  };
  std::vector<Draw> ds;
  const std::vector<Complex> fixed = {1.0,
                                      std::polar(0.3, 0.25 * pi),
                                      std::polar(3.0, -0.25 * pi),
                                      std::polar(1.0, 0.5 * pi),
                                      std::polar(0.5, -0.5 * pi),
                                      std::polar(2.0, 0.59 * pi),
                                      std::polar(1.0, -0.59 * pi),
                                      std::polar(5.0, 0.1 * pi)};
  if (c.contains("psi") || c.contains("matrix")) {
    if (!c.contains("psi") || !c.contains("matrix")) throw SpecError("config: \"psi\" and \"matrix\" go together");
    const double omega = c.contains("omega") ? c.at("omega").get<double>() : 0.6 * pi;
    ds.push_back({"CUSTOM", parse_psi(c.at("psi")), parse_matrix(c.at("matrix")),
                  c.contains("z") ? config_zs(c) : std::vector<Complex>{1.0}, omega});
  } else {
    for (int i = 0; i < draws; ++i) {
      auto psi = random_bernstein(rng);
      ds.push_back({"RESOLVENT", psi, random_normal_matrix(rng, rng.integer(2, 8), pi / 3, 0.2, 5.0), fixed, 0.6 * pi});
    }
    Matrix J1(2, 2), J2(2, 2);
    J1 << 1.0, 1.0, 0.0, 2.0;
    J2 << std::polar(1.0, pi / 8), 1.5, 0.0, 2.0;
    ds.push_back({"FIXTURE", BernsteinFn::one_minus_exp(), J1, {std::polar(1.0, pi / 3)}, 0.6 * pi});
    ds.push_back({"FIXTURE", BernsteinFn::log1p(), J2, {std::polar(2.0, -pi / 4)}, 0.6 * pi});
  }
  Suite s;
  std::map<std::string, int> counter;
  for (const auto& d : ds)
    s.tasks.push_back({d.id, counter[d.id]++, [d, tol] {
                         const auto S = make_sectorial(d.A);
                         const auto res = resolvent_identity_residuals(d.psi, S, d.zs, d.omega);
                         CheckReport r;
                         r.tolerance = tol;
                         r.worst_margin = inf;
                         for (std::size_t k = 0; k < res.size(); ++k) {
                           ++r.samples;
                           if (-res[k].residual < r.worst_margin) {
                             r.worst_margin = -res[k].residual;
                             r.worst_z = d.zs[k];
                           }
                         }
                         r.constants["residual"] = -r.worst_margin;
                         r.constants["dim"] = double(d.A.rows());
                         r.constants["omega_hat"] = S.omega_hat();
                         r.note = d.psi.describe();
                         return r;
                       }});
  return s;
}

Suite sectoriality_constants(const SuiteConfig& cfg, Rng& rng) {
  const Json& c = cfg.config;
  const int draws = config_int(c, "draws", 20, 1, 10000);
  struct Draw {
    Matrix A;
    BernsteinFn cbf, bf;
    double r;
  };
  std::vector<Draw> ds;
  for (int i = 0; i < draws; ++i) {
    const Index n = rng.integer(2, 6);
    const double ang = rng.uniform(0.0, pi / 3);
    Matrix A = rng.uniform() < 1.0 / 3 ? random_nonnormal_matrix(rng, n, ang, 0.2, 5.0, 0.3)
                                       : random_normal_matrix(rng, n, ang, 0.2, 5.0);
    const int pick = rng.integer(0, 2);
    BernsteinFn cbf = pick == 0   ? BernsteinFn::power(rng.uniform(0.2, 0.9))
                      : pick == 1 ? BernsteinFn::log1p()
                                  : BernsteinFn::sum({BernsteinFn::log1p(), BernsteinFn::power(0.5)});
    BernsteinFn bf = random_bernstein(rng);
    ds.push_back({A, cbf, bf, rng.uniform(0.2, 0.8)});
  }
  if (c.contains("matrix")) ds = {{parse_matrix(c.at("matrix")), BernsteinFn::power(0.5), BernsteinFn::one_minus_exp(), 0.5}};
  if (c.contains("psi")) {
    const auto p = parse_psi(c.at("psi"));
    for (auto& d : ds) {
      d.bf = p;
      if (p.stieltjes()) d.cbf = p;
    }
  }
  Suite s;
  const double scale = cfg.tol_scale;
  for (std::size_t i = 0; i < ds.size(); ++i)
    for (const auto& id : bound_suite_ids()) {
      const bool needs_cbf = id == "FRPOW1" || id == "AEST";
      s.tasks.push_back({id, int(i), [d = ds[i], id, needs_cbf, scale] {
                           const auto S = make_sectorial(d.A);
                           BoundParams p;
                           p.r = d.r;
                           const auto& psi = needs_cbf ? d.cbf : d.bf;
                           auto r = bound_suite(psi, S, id, p);
                           r.tolerance *= scale;
                           r.constants["omega_hat"] = S.omega_hat();
                           r.constants["normal"] = S.normal() ? 1.0 : 0.0;
                           r.note = psi.describe();
                           return r;
                         }});
    }
  return s;
}

Suite subordination(const SuiteConfig& cfg, Rng& rng) {
  const Json& c = cfg.config;
  const int draws = config_int(c, "draws", 5, 1, 1000);
  std::vector<std::pair<std::string, SubordinatorFamily>> fams = {{"gamma", SubordinatorFamily::gamma()},
                                                                  {"stable_half", SubordinatorFamily::stable_half()},
                                                                  {"poisson", SubordinatorFamily::poisson(1.0)}};
  if (c.contains("family")) fams = {{"custom", parse_family(c.at("family"))}};
  std::vector<Matrix> mats;
  if (c.contains("matrix"))
    mats.push_back(parse_matrix(c.at("matrix")));
  else
    for (int i = 0; i < draws; ++i)
      mats.push_back(random_normal_matrix(rng, rng.integer(2, 8), pi / 3, 0.2, 5.0));
  const std::vector<double> ts = {0.1, 0.5, 1.0, 2.5};
  const std::vector<Complex> zs = {0.0, 0.5, 2.0, {1.0, 1.0}, {0.3, -2.0}, {5.0, 5.0}};
  const double sc = cfg.tol_scale;
  Suite s;
  for (const auto& [name, f] : fams) {
    s.tasks.push_back({"LAPLACE/" + name, 0, [f = f, ts, zs, sc] {
                         auto r = laplace_consistency_check(f, ts, zs);
                         r.tolerance *= sc;
                         return r;
                       }});
    s.tasks.push_back({"SEMIGROUP/" + name, 0, [f = f, zs, sc] {
                         auto r = semigroup_property_check(f, 0.5, 1.5, zs);
                         r.tolerance *= sc;
                         return r;
                       }});
    for (std::size_t i = 0; i < mats.size(); ++i)
      s.tasks.push_back({"MATRIX/" + name, int(i), [f = f, A = mats[i], sc] {
                           const auto S = make_sectorial(A);
                           double worst = 0.0;
                           for (double t : {0.5, 1.5}) {
                             const Matrix e = eigen_oracle([&](Complex l) { return f.laplace_exact(t, l); }, A);
                             worst = std::max(worst, rel_err(subordinate_matrix(f, S, t), e));
                             if (f.psi().triple())
                               worst = std::max(worst, rel_err(subordinate_matrix(f, S, t), expm(-t * levy_apply(f.psi(), S))));
                           }
                           auto r = error_report("", worst, 1e-6 * sc);
                           r.samples = 2;
                           return r;
                         }});
    const bool t1_ok = f.kind() == SubordinatorFamily::Kind::Gamma || f.kind() == SubordinatorFamily::Kind::StableHalf ||
                       f.kind() == SubordinatorFamily::Kind::Poisson;
    if (t1_ok)
      s.tasks.push_back({"T1/" + name, 0, [f = f] {
                           const auto tab = t1_diagnostic(f, 10);
                           CheckReport r;
                           r.samples = long(tab.rows.size());
                           r.tolerance = 0.0;
                           r.worst_margin = tab.bounded ? 0.0 : -1.0;
                           r.constants["max_product"] = tab.max_product;
                           r.constants["last_product"] = tab.rows.back().product;
                           r.constants["degenerate"] = tab.degenerate ? 1.0 : 0.0;
                           r.note = tab.note;
                           return r;
                         }});
  }
  if (!c.contains("family"))
    for (std::size_t i = 0; i < mats.size(); ++i)
      s.tasks.push_back({"GAMMA-POWER", int(i), [A = mats[i], sc] {
                           const auto S = make_sectorial(A);
                           double worst = 0.0;
                           for (double t : {0.3, 1.0, 2.0}) {
                             const Matrix o = eigen_oracle([t](Complex l) { return std::pow(1.0 + l, -t); }, A);
                             worst = std::max(worst, rel_err(subordinate_matrix(SubordinatorFamily::gamma(), S, t), o));
                           }
                           auto r = error_report("", worst, 1e-8 * sc);
                           r.samples = 3;
                           return r;
                         }});
  const auto& prof = fams.front().second.has_density() ? fams.front().second : SubordinatorFamily::gamma();
  std::vector<std::vector<double>> rows;
  for (int k = 0; k <= 25; ++k) {
    const double x = std::pow(10.0, -3.0 + 5.0 * k / 25.0);
    rows.push_back({0.5, x, prof.density(0.5, x)});
  }
  s.tables["density-profile"] = table({"t", "s", "value"}, rows);
  if (prof.kind() == SubordinatorFamily::Kind::Gamma || prof.kind() == SubordinatorFamily::Kind::StableHalf) {
    std::vector<std::vector<double>> t1;
    for (const auto& r : t1_diagnostic(prof, 10).rows) t1.push_back({r.t, r.norm, r.product});
    s.tables["t1"] = table({"t", "norm", "product"}, t1);
  }
  return s;
}

Suite cm_appendix(const SuiteConfig& cfg, Rng&) {
  const double tol = 1e-9 * cfg.tol_scale;
  Suite s;
  auto add = [&](const std::string& id, int index, std::map<std::string, double> consts,
                 std::function<Complex(Complex)> f) {
    s.tasks.push_back({id, index, [f, consts, tol] {
                         CmOptions opt;
                         opt.tol = tol;
                         const auto g = grid16();
                         const auto v = cm_test(f, 8, g, opt);
                         CheckReport r;
                         r.samples = long(g.size()) * 9;
                         r.tolerance = tol;
                         r.worst_margin = v.worst_margin;
                         r.constants = consts;
                         r.constants["nodes"] = v.nodes;
                         if (v.violation) {
                           r.worst_lambda = v.violation->x;
                           r.constants["violation_k"] = v.violation->k;
                           r.worst_margin = std::min(r.worst_margin, -2.0 * tol);
                         }
                         return r;
                       }});
  };
  const auto ome = BernsteinFn::one_minus_exp();
  int i = 0;
  for (double a : {0.2, 0.35, 0.5})
    for (double b : {1.0, 1.0 / a - 1.0})
      add("POWER-RATIO", i++, {{"alpha", a}, {"beta", b}}, [ome, a, b](Complex z) {
        const Complex za = std::pow(z, a);
        return std::pow(ome(za) / za, b);
      });
  const auto mix = BernsteinFn::sum({BernsteinFn::log1p(), BernsteinFn::power(0.6)});
  i = 0;
  for (double a : {0.25, 0.5})
    add("POWER-DERIVATIVE", i++, {{"alpha", a}}, [mix, a](Complex z) {
      const Complex za = std::pow(z, a);
      return mix.derivative(za, 1) * std::pow(mix(za) / za, 1.0 / a - 1.0);
    });
  i = 0;
  for (double a : {0.3, 0.7, 0.9})
    add("NON-SPECIAL", i++, {{"alpha", a}}, [a](Complex z) {
      const Complex w = std::pow(z, a);
      const double e = 1.0 / a - 1.0;
      return 2.0 / std::pow(1.0 + w, 3.0) * std::pow(1.0 + w, -e) * std::pow((1.0 + w) / (2.0 + w), -e);
    });
  return s;
}

using SuiteFn = Suite (*)(const SuiteConfig&, Rng&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r = {
      {"scalar-inequalities", scalar_inequalities}, {"contour-bounds", contour_bounds},
      {"calculi-compat", calculi_compat},           {"resolvent-identity", resolvent_identity},
      {"sectoriality-constants", sectoriality_constants}, {"subordination", subordination},
      {"cm-appendix", cm_appendix}};
  return r;
}

std::uint64_t mix_seed(std::uint64_t seed, const std::string& suite) {
  // FNV-1a of the suite name, folded into a splitmix64 step
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : suite) h = (h ^ ch) * 1099511628211ull;
  std::uint64_t z = seed + h + 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

const std::vector<std::string>& suite_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& [k, _] : registry()) v.push_back(k);
    return v;
  }();
  return ids;
}

SuiteResult run_suite(const SuiteConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  SuiteFn fn = nullptr;
  for (const auto& [k, f] : registry())
    if (k == cfg.suite) fn = f;
  if (!fn) throw SpecError("unknown suite \"" + cfg.suite + "\"");
  if (!cfg.config.is_object()) throw SpecError("config must be a JSON object");
  for (auto it = cfg.config.begin(); it != cfg.config.end(); ++it)
    if (!config_keys.count(it.key())) throw SpecError("config: unknown key \"" + it.key() + "\"");
  if (!(cfg.tol_scale > 0.0) || !std::isfinite(cfg.tol_scale)) throw SpecError("tol-scale must be positive");

  Rng rng(mix_seed(cfg.seed, cfg.suite));
  Suite suite;
  try {
    suite = fn(cfg, rng);
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("config: ") + e.what());
  }
  const auto t1 = std::chrono::steady_clock::now();
  const auto outcomes = run_tasks(suite.tasks, cfg.threads);
  const auto t2 = std::chrono::steady_clock::now();

  Json checks = Json::array();
  long passed = 0, failed = 0, qfail = 0;
  double worst = inf;
  for (const auto& o : outcomes) {
    Json j = report_to_json(o.rep);
    Json e;
    e["id"] = o.id;
    e["index"] = o.index;
    for (auto it = j.begin(); it != j.end(); ++it)
      if (it.key() != "id") e[it.key()] = it.value();
    checks.push_back(e);
    (o.rep.pass ? passed : failed)++;
    if (o.quadrature_failure) ++qfail;
    worst = std::min(worst, o.rep.worst_margin);
  }
  Json report;
  report["schema"] = "1";
  report["suite"] = cfg.suite;
  report["seed"] = cfg.seed;
  report["tol_scale"] = cfg.tol_scale;
  report["config"] = cfg.config;
  report["checks"] = checks;
  report["skipped"] = Json::array();
  report["tables"] = suite.tables;
  report["summary"] = {{"checks", long(outcomes.size())},
                       {"pass", passed},
                       {"fail", failed},
                       {"quadrature_failures", qfail},
                       {"worst_margin", std::isfinite(worst) ? Json(worst) : Json(nullptr)},
                       {"all_pass", failed == 0}};
  if (cfg.timing) {
    const auto sec = [](auto a, auto b) { return std::chrono::duration<double>(b - a).count(); };
    report["timing"] = {{"setup_seconds", sec(t0, t1)}, {"checks_seconds", sec(t1, t2)}};
  }
  SuiteResult res;
  res.report = report;
  res.exit_code = qfail > 0 ? 3 : failed > 0 ? 1 : 0;
  return res;
}

SuiteResult run_suite_safe(const SuiteConfig& cfg) {
  try {
    return run_suite(cfg);
  } catch (const SpecError& e) {
    SuiteResult r;
    r.exit_code = 2;
    r.report = {{"schema", "1"}, {"suite", cfg.suite}, {"error", e.what()}};
    return r;
  }
}

const std::vector<std::string>& plot_kinds() {
  static const std::vector<std::string> k = {"margin-vs-|z|", "ratio-table", "density-profile"};
  return k;
}

namespace {

std::string csv_number(const Json& v) {
  if (v.is_null()) return "nan";
  std::ostringstream os;
  os.precision(17);
  os << v.get<double>();
  return os.str();
}

std::string csv(const Json& t) {
  std::ostringstream os;
  const auto& cols = t.at("columns");
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i].get<std::string>();
  os << "\n";
  for (const auto& row : t.at("rows")) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_number(row[i]);
    os << "\n";
  }
  return os.str();
}

}  // namespace

std::string emit_plotdata(const Json& report, const std::string& kind) {
  if (std::find(plot_kinds().begin(), plot_kinds().end(), kind) == plot_kinds().end())
    throw SpecError("unknown plot kind \"" + kind + "\"");
  try {
    if (kind == "margin-vs-|z|") {
      std::vector<std::vector<double>> rows;
      if (report.contains("checks"))
        for (const auto& c : report.at("checks")) {
          if (c.at("id") != "CONTOUR") continue;
          const auto& k = c.at("constants");
          rows.push_back({k.at("abs_z").get<double>(), k.at("integral").get<double>(), k.at("bound").get<double>(),
                          c.at("index").get<double>()});
        }
      if (rows.empty()) throw SpecError("report has no contour-bound checks");
      std::sort(rows.begin(), rows.end());
      for (auto& r : rows) r.pop_back();
      return csv(table({"abs_z", "integral", "bound"}, rows));
    }
    if (!report.contains("tables") || !report.at("tables").contains(kind))
      throw SpecError("report has no \"" + kind + "\" table");
    return csv(report.at("tables").at(kind));
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("malformed report: ") + e.what());
  }
}

}  // namespace bfcalc
