#include "bfcalc/geometry.hpp"

#include <algorithm>
#include <functional>

namespace bfcalc {

Sector::Sector(double beta, std::optional<double> R, bool upper) : half_angle(beta), radius(R), upper_half(upper) {
  if (!(beta > 0.0 && beta <= pi)) throw DomainError("sector half-angle must lie in (0, pi]");
  if (R && !(*R > 0.0)) throw DomainError("sector radius must be positive");
}

bool Sector::contains(Complex z, double slack) const {
  if (z == Complex(0.0)) return false;
  const double a = std::arg(z);
  if (radius && std::abs(z) >= *radius) return false;
  if (upper_half) return a >= -slack && a <= half_angle + slack;
  return std::abs(a) <= half_angle + slack;
}

const std::vector<std::string>& inequality_ids() {
  static const std::vector<std::string> ids = {"FEH", "RE", "R1", "CPSI", "LOW", "AREP1", "L12", "L22", "SECT"};
  return ids;
}

double growth_constant(const BernsteinFn& psi) {
  auto t = psi.triple();
  if (!t) throw UnsupportedError("growth constant needs a Levy triple");
  return t->a + t->b + first_moment(t->mu.restricted(0.0, 1.0)) + 2.0 * total_mass(t->mu.restricted(1.0, inf));
}

namespace {

struct Sample {
  double L, R;
  Complex lambda, z;
};

using SampleFn = std::function<Sample(double, double, int)>;

double margin_of(const Sample& s) {
  if (!std::isfinite(s.L) || !std::isfinite(s.R)) return -inf;
  return (s.R - s.L) / std::max({1.0, std::abs(s.L), std::abs(s.R)});
}

void record(CheckReport& rep, const Sample& s) {
  const double m = margin_of(s);
  ++rep.samples;
  if (m < rep.worst_margin) {
    rep.worst_margin = m;
    rep.worst_lambda = s.lambda;
    rep.worst_z = s.z;
  }
}

// Golden-section minimisation of the margin along one coordinate.
template <class F>
void golden(F&& m, double lo, double hi, int steps) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = m(c), fd = m(d);
  for (int i = 0; i < steps; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = m(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = m(d);
    }
  }
}

CheckReport run_grid(const std::string& id, const SampleFn& f, int variants, double xmin, double xmax,
                     const SamplingPlan& plan) {
  CheckReport rep;
  rep.id = id;
  rep.tolerance = plan.tolerance;
  const int nr = std::max(2, plan.radii), na = std::max(2, plan.angles);
  int wi = 0, wj = 0, wv = 0;
  double worst = inf;
  for (int i = 0; i < nr; ++i) {
    const double x = xmin + (xmax - xmin) * i / (nr - 1);
    for (int j = 0; j < na; ++j) {
      const double a = double(j) / (na - 1);
      const int v = (i * na + j) % variants;
      const Sample s = f(x, a, v);
      record(rep, s);
      const double m = margin_of(s);
      if (m < worst) {
        worst = m;
        wi = i;
        wj = j;
        wv = v;
      }
    }
  }
  if (plan.refine && std::isfinite(worst)) {
    const double dx = (xmax - xmin) / (nr - 1), da = 1.0 / (na - 1);
    double bx = xmin + dx * wi, ba = da * wj;
    double best = worst;
    const int half = std::max(1, plan.refine_steps / 2);
    golden(
        [&](double x) {
          const Sample s = f(x, ba, wv);
          record(rep, s);
          const double m = margin_of(s);
          if (m < best) {
            best = m;
            bx = x;
          }
          return m;
        },
        std::max(xmin, bx - dx), std::min(xmax, bx + dx), half);
    golden(
        [&](double a) {
          const Sample s = f(bx, a, wv);
          record(rep, s);
          return margin_of(s);
        },
        std::max(0.0, ba - da), std::min(1.0, ba + da), half);
  }
  rep.finalize();
  return rep;
}

double re_arg(double a, double beta) { return beta * (2.0 * a - 1.0); }

}  // namespace

CheckReport check_inequality(const std::string& id, const BernsteinFn& psi, const SamplingPlan& plan) {
  const double lmin = std::log(plan.r_min), lmax = std::log(plan.r_max);
  auto ray = [](double x, double th) { return std::polar(std::exp(x), th); };

  if (id == "FEH") {
    static const double gb[5][2] = {{pi / 4, pi / 8}, {pi / 2, pi / 4}, {3 * pi / 4, pi / 8}, {pi / 3, 0.45 * pi},
                                    {0.9 * pi, 0.05 * pi}};
    static const double zr[3] = {1e-3, 1.0, 1e3};
    static const double zf[4] = {-1.0, -0.3, 0.6, 1.0};
    auto f = [&](double x, double a, int v) {
      const double g = gb[v % 5][0], b = gb[v % 5][1];
      const Complex z = std::polar(zr[(v / 5) % 3], g * zf[(v / 15) % 4]);
      const Complex lam = ray(x, re_arg(a, b));
      const Complex p = psi(lam);
      return Sample{std::cos((g + b) / 2) * (std::abs(z) + std::abs(p)), std::abs(z + p), lam, z};
    };
    return run_grid(id, f, 60, lmin, lmax, plan);
  }
  if (id == "RE") {
    auto f = [&](double x, double a, int) {
      const Complex lam = ray(x, re_arg(a, pi / 2));
      return Sample{psi(lam.real()).real(), psi(lam).real(), lam, 0.0};
    };
    return run_grid(id, f, 1, lmin, lmax, plan);
  }
  if (id == "R1") {
    auto f = [&](double x, double a, int v) {
      const double b = 0.5 * pi * a;
      const double t = std::exp(x);
      const Complex lam = std::polar(t, v ? -b : b);
      return Sample{psi(t * std::cos(b)).real(), std::abs(psi(lam)), lam, 0.0};
    };
    return run_grid(id, f, 2, lmin, lmax, plan);
  }
  if (id == "CPSI") {
    const double c = growth_constant(psi);
    auto f = [&](double x, double a, int) {
      const Complex z = ray(x, re_arg(a, pi / 2));
      return Sample{std::abs(psi(z)), c * std::abs(z), 0.0, z};
    };
    auto rep = run_grid(id, f, 1, 0.0, std::max(lmax, 1e-3), plan);
    rep.constants["c_psi"] = c;
    return rep;
  }
  if (id == "LOW") {
    const double d1 = psi.derivative(1.0, 1).real();
    static const double betas[4] = {pi / 8, pi / 4, 3 * pi / 8, pi / 2};
    auto f = [&](double x, double a, int v) {
      const double b = betas[v % 4];
      const Complex z = ray(x, re_arg(a, b));
      return Sample{std::abs(z) * d1 * std::cos(b), std::abs(psi(z)), 0.0, z};
    };
    auto rep = run_grid(id, f, 4, std::min(lmin, -1e-3), 0.0, plan);
    rep.constants["psi_prime_1"] = d1;
    return rep;
  }
  if (id == "AREP1" || id == "L12" || id == "L22") {
    const AssociatedCbf phi(psi);
    if (id == "AREP1") {
      auto f = [&](double x, double a, int) {
        const Complex lam = ray(x, re_arg(a, pi / 2));
        return Sample{phi(lam.real()).real(), psi(lam).real(), lam, 0.0};
      };
      return run_grid(id, f, 1, lmin, lmax, plan);
    }
    if (id == "L12") {
      auto f = [&](double x, double a, int) {
        const Complex lam = ray(x, re_arg(a, 0.5 * pi * (1.0 - 1e-3)));
        const double rhs = 2.0 * std::norm(lam) * std::abs(phi.derivative(lam.real(), 2).real());
        return Sample{std::abs(phi.psi_minus_phi(lam)), rhs, lam, 0.0};
      };
      return run_grid(id, f, 1, lmin, lmax, plan);
    }
    static const double betas[4] = {pi / 8, pi / 4, 3 * pi / 8, 0.49 * pi};
    auto f = [&](double x, double a, int v) {
      const double b = betas[v % 4];
      const Complex lam = ray(x, re_arg(a, b));
      const double rhs = 4.0 * std::abs(lam) * phi.derivative(lam.real(), 1).real() / std::cos(b);
      return Sample{std::abs(phi.psi_minus_phi(lam)), rhs, lam, 0.0};
    };
    return run_grid(id, f, 4, lmin, lmax, plan);
  }
  if (id == "SECT") {
    static const double omegas[5] = {pi / 8, pi / 4, pi / 3, 0.45 * pi, pi / 2};
    auto f = [&](double x, double a, int v) {
      const double w = omegas[v % 5];
      const Complex lam = ray(x, re_arg(a, w));
      return Sample{std::abs(arg0(psi(lam))), w, lam, 0.0};
    };
    return run_grid(id, f, 5, lmin, lmax, plan);
  }
  throw DomainError("unknown inequality id: " + id);
}

ShrinkAngles cbf_shrink_angles(double gamma, double theta) {
  if (!(gamma > 0.0 && gamma < pi / 2)) throw DomainError("gamma must lie in (0, pi/2)");
  const double ct = 1.0 / std::tan(gamma);
  const double kappa = ct / (1.0 + ct);
  const double theta0 = pi - std::acos(kappa);
  if (!(theta > pi / 2) || theta > theta0 + 1e-12) throw DomainError("theta must lie in (pi/2, theta0]");
  const double c = (1.0 + ct) / std::sin(theta) * (kappa - std::abs(std::cos(theta)));
  return {theta0, std::atan2(1.0, std::max(c, 0.0))};
}

ShrinkReport check_cbf_sector_shrink(const BernsteinFn& psi, double gamma, double theta, const SamplingPlan& plan) {
  const ShrinkAngles ang = cbf_shrink_angles(gamma, theta);
  const double lmin = std::log(plan.r_min), lmax = std::log(plan.r_max);
  ShrinkReport out;
  auto upper = [&](double x, double a, int) {
    const Complex lam = std::polar(std::exp(x), theta * a);
    const double g = arg0(psi.extended(lam));
    // margin against [0, theta~]
    return Sample{std::max(-g, g - ang.theta_tilde), 0.0, lam, 0.0};
  };
  out.upper_half = run_grid("CBF_SHRINK_UPPER", upper, 1, lmin, lmax, plan);
  auto full = [&](double x, double a, int) {
    const Complex lam = std::polar(std::exp(x), re_arg(a, theta));
    return Sample{std::abs(arg0(psi.extended(lam))), ang.theta_tilde, lam, 0.0};
  };
  out.full_sector = run_grid("CBF_SHRINK_FULL", full, 1, lmin, lmax, plan);
  for (auto* r : {&out.upper_half, &out.full_sector}) {
    r->constants["theta0"] = ang.theta0;
    r->constants["theta_tilde"] = ang.theta_tilde;
  }
  return out;
}

ContourBoundResult contour_bound_check(const BernsteinFn& psi, Complex z, double omega, double beta, double rel_tol) {
  if (!(omega > pi / 2 && omega < pi)) throw DomainError("omega must lie in (pi/2, pi)");
  if (!(beta > 0.0 && beta < pi - omega)) throw DomainError("beta must lie in (0, pi - omega)");
  if (z == Complex(0.0) || std::abs(std::arg(z)) >= omega) throw DomainError("z must lie in the open sector of angle omega");
  const AssociatedCbf phi(psi);
  const double c = std::cos(beta), K = std::cos((omega + beta) / 2);
  const double az = std::abs(z);
  ContourBoundResult res;
  res.bound = 8.0 / (c * c * K * K * az);
  const double pref = 8.0 / (K * K * c * c);
  const double phi_inf = phi.at_infinity();
  const double tail_inf = std::isfinite(phi_inf) ? 1.0 / (az + phi_inf) : 0.0;
  auto upper_tail = [&](double u) {
    return std::max(0.0, pref * (1.0 / (az + phi(std::exp(u) * c).real()) - tail_inf));
  };
  auto lower_tail = [&](double u) {
    return std::max(0.0, pref * (1.0 / (az + phi.a()) - 1.0 / (az + phi(std::exp(u) * c).real())));
  };
  const double target = 1e-3 * rel_tol * res.bound;
  double umax = 0.0, umin = 0.0;
  while (upper_tail(umax) > target && umax < 200.0) umax += 1.0;
  while (lower_tail(umin) > target && umin > -200.0) umin -= 1.0;
  res.u_min = umin;
  res.u_max = umax;
  res.truncation = upper_tail(umax) + lower_tail(umin);
  auto g = [&](double u) {
    const Complex lp = std::polar(std::exp(u), beta), lm = std::polar(std::exp(u), -beta);
    return std::abs(resolvent_diff_scalar(psi, phi, lp, z)) + std::abs(resolvent_diff_scalar(psi, phi, lm, z));
  };
  QuadTol tol;
  tol.abs = 1e-4 * rel_tol * res.bound;
  tol.rel = 1e-3 * rel_tol;
  tol.max_panels = 20000;
  auto q = gauss_kronrod(g, umin, umax, tol, int(umax - umin));
  if (!q.converged) throw QuadratureError("contour bound integral did not converge", q.error);
  res.integral = q.value;
  res.quadrature_error = q.error;
  res.evaluations = q.evaluations;
  res.margin = (res.bound - res.integral - res.truncation) / res.bound;
  res.pass = res.margin >= -rel_tol;
  return res;
}

double improving_angles(AngleMode mode, double theta1, double theta2, double extra) {
  if (mode == AngleMode::CK) {
    const double th = extra;
    if (!(th > pi / 2 && th < pi)) throw DomainError("CK: theta must lie in (pi/2, pi)");
    return pi / 2 * (1.0 - pi / (2.0 * th));
  }
  if (!(theta1 > 0.0 && theta1 < pi)) throw DomainError("theta1 must lie in (0, pi)");
  if (!(theta2 > pi / 2 && theta2 < pi)) throw DomainError("theta2 must lie in (pi/2, pi)");
  const double ratio = theta1 / theta2;
  switch (mode) {
    case AngleMode::BHH0: {
      const double g = extra;
      if (!(g > 0.0 && g < pi * theta2 / (2.0 * theta1))) throw DomainError("BHH0: gamma must lie in (0, pi theta2/(2 theta1))");
      return pi / 2 * (1.0 - 2.0 * g / pi * ratio);
    }
    case AngleMode::BHH:
      if (theta1 > theta2) throw DomainError("BHH: needs theta1 <= theta2");
      return pi / 2 * (1.0 - ratio);
    case AngleMode::BHHT: {
      const double t0 = extra;
      if (theta1 > theta2) throw DomainError("BHHT: needs theta1 <= theta2");
      if (!(t0 > 0.0 && t0 <= pi / 2)) throw DomainError("BHHT: theta0 must lie in (0, pi/2]");
      return t0 + (pi / 2 - t0) * (1.0 - ratio);
    }
    default: break;
  }
  throw DomainError("unknown angle mode");
}

CheckReport carasso_kato_check(const BernsteinFn& psi, CkMode mode, double gamma, double beta, double theta, double r,
                               const SamplingPlan& plan) {
  const double lmax = std::log(plan.r_max);
  if (mode == CkMode::Run) {
    if (!(gamma > 0.0 && gamma <= pi / 2)) throw DomainError("gamma must lie in (0, pi/2]");
    if (!(beta >= 0.0)) throw DomainError("shift must be nonnegative");
    auto f = [&](double x, double a, int) {
      const Complex lam = std::polar(std::exp(x), re_arg(a, pi / 2));
      return Sample{std::abs(arg0(psi(lam) + beta)), gamma, lam, 0.0};
    };
    auto rep = run_grid("CK_RUN", f, 1, std::log(plan.r_min), lmax, plan);
    rep.constants["gamma"] = gamma;
    rep.constants["beta"] = beta;
    rep.constants["max_arg"] = gamma - rep.worst_margin;
    return rep;
  }
  if (!(theta > pi / 2 && theta < pi)) throw DomainError("theta must lie in (pi/2, pi)");
  if (!(r > 0.0)) throw DomainError("radius must be positive");
  auto f = [&](double x, double a, int) {
    const Complex lam = std::polar(std::exp(x), theta * a);
    const double g = arg0(psi.extended(lam));
    return Sample{std::max(-g, g - pi / 2), 0.0, lam, 0.0};
  };
  auto rep = run_grid("CK_SECTOR", f, 1, std::log(std::max(r, plan.r_min)), std::max(lmax, std::log(r) + 1.0), plan);
  rep.constants["theta"] = theta;
  rep.constants["r"] = r;
  return rep;
}

std::vector<RatioRow> fujita_ratio_probe(const BernsteinFn& psi, double alpha, const std::vector<double>& thetas,
                                         const std::vector<double>& rs) {
  std::vector<RatioRow> rows;
  for (double r : rs) {
    const Complex base = psi(r);
    for (double th : thetas) {
      const Complex ratio = psi.extended(std::polar(r, th)) / base;
      rows.push_back({r, th, ratio, std::abs(ratio - std::polar(1.0, alpha * th))});
    }
  }
  return rows;
}

}  // namespace bfcalc
