#include "bfcalc/sectorial.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <Eigen/Eigenvalues>

namespace bfcalc {

SupEstimate sector_sup(const std::function<double(Complex)>& g, double half_angle, double center, const SupPlan& plan) {
  SupEstimate est;
  const int nr = std::max(2, plan.radii);
  const int na = half_angle > 0.0 ? std::max(2, plan.angles) : 1;
  const double x0 = std::log(center) - plan.decades * std::log(10.0);
  const double x1 = std::log(center) + plan.decades * std::log(10.0);
  const double dx = (x1 - x0) / (nr - 1);
  auto angle = [&](int j) { return na == 1 ? 0.0 : -half_angle + 2.0 * half_angle * j / (na - 1); };
  auto eval = [&](double x, double th) {
    const Complex z = std::polar(std::exp(x), th);
    const double v = g(z);
    ++est.evaluations;
    if (v > est.value || !std::isfinite(v)) {
      est.value = v;
      est.worst_z = z;
    }
    return v;
  };
  int wi = 0, wj = 0;
  double best = -1.0;
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < na; ++j) {
      const double v = eval(x0 + dx * i, angle(j));
      if (v > best) {
        best = v;
        wi = i;
        wj = j;
      }
    }
  if (!std::isfinite(est.value)) return est;
  // golden-section maximisation along the worst ray, then in angle
  const double g0 = 0.5 * (std::sqrt(5.0) - 1.0);
  auto golden = [&](auto&& f, double a, double b, int steps) {
    double c = b - g0 * (b - a), d = a + g0 * (b - a);
    double fc = f(c), fd = f(d);
    double arg_best = fc > fd ? c : d;
    for (int k = 0; k < steps; ++k) {
      if (fc > fd) {
        b = d; d = c; fd = fc;
        c = b - g0 * (b - a);
        fc = f(c);
      } else {
        a = c; c = d; fc = fd;
        d = a + g0 * (b - a);
        fd = f(d);
      }
      arg_best = fc > fd ? c : d;
    }
    return arg_best;
  };
  const double th0 = angle(wj);
  const double xb = golden(
      [&](double x) {
        const double v = eval(x, th0);
        est.history.emplace_back(x, v);
        return v;
      },
      std::max(x0, x0 + dx * (wi - 1)), std::min(x1, x0 + dx * (wi + 1)), plan.refine_steps / 2);
  if (na > 1) {
    const double dth = 2.0 * half_angle / (na - 1);
    golden([&](double th) { return eval(xb, th); }, std::max(-half_angle, th0 - dth), std::min(half_angle, th0 + dth),
           plan.refine_steps / 2);
  }
  return est;
}

SupEstimate resolvent_sup(const Matrix& X, double half_angle, const SupPlan& plan) {
  require_square(X, "resolvent_sup");
  Eigen::ComplexEigenSolver<Matrix> es(X, false);
  double lg = 0.0;
  int cnt = 0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double m = std::abs(es.eigenvalues()(i));
    if (m > 0.0) {
      lg += std::log(m);
      ++cnt;
    }
  }
  const double center = cnt ? std::exp(lg / cnt) : 1.0;
  auto g = [&](Complex z) {
    try {
      return std::abs(z) * spectral_norm(resolvent(X, z));
    } catch (const NearSpectrumError&) {
      return inf;
    }
  };
  return sector_sup(g, half_angle, center, plan);
}

SupEstimate SectorialMatrix::sector_constant(double half_angle, const SupPlan& plan) const {
  if (!(half_angle >= 0.0 && half_angle < pi)) throw DomainError("sector half-angle must lie in [0, pi)");
  if (half_angle >= pi - omega_) throw DomainError("sector meets the spectrum of -A");
  return resolvent_sup(A_, half_angle, plan);
}

SectorialMatrix make_sectorial(const Matrix& A, const SupPlan& plan) {
  require_square(A, "make_sectorial");
  SectorialMatrix s;
  s.A_ = A;
  Eigen::ComplexEigenSolver<Matrix> es(A, false);
  s.eig_ = es.eigenvalues();
  s.norm_ = spectral_norm(A);
  double lg = 0.0;
  s.min_mod_ = inf;
  for (Index i = 0; i < s.eig_.size(); ++i) {
    const Complex l = s.eig_(i);
    const double m = std::abs(l);
    if (m <= 1e-13 * std::max(1.0, s.norm_) || std::abs(std::arg(l)) >= pi - 1e-12)
      throw NotSectorialError("eigenvalue on (-inf, 0]: A is not sectorial");
    s.omega_ = std::max(s.omega_, std::abs(std::arg(l)));
    s.min_mod_ = std::min(s.min_mod_, m);
    lg += std::log(m);
  }
  s.center_ = std::exp(lg / double(s.eig_.size()));
  s.normal_ = is_normal(A);
  s.M_ = resolvent_sup(A, 0.0, plan);
  s.cache_ = std::make_shared<ExpmCache>(A);
  return s;
}

}  // namespace bfcalc
