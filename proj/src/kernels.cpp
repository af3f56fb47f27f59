#include "bfcalc/kernels.hpp"

#include <boost/math/special_functions/gamma.hpp>

namespace bfcalc {

Complex delta(Complex w) {
  if (std::norm(w) < 0.01) {
    // sum_{n>=2} (-w)^n (1 - 1/n!)
    Complex p = w * w, sum = 0.0;
    double fact = 2.0;
    for (int n = 2; n <= 24; ++n) {
      if (n > 2) fact *= n;
      sum += p * (1.0 - 1.0 / fact);
      p *= -w;
      if (std::norm(p) <= 1e-34 * std::norm(sum)) break;
    }
    return sum;
  }
  const Complex d = 1.0 + w;
  const double nd = std::norm(d);
  const Complex inv = std::conj(d) / nd;
  const double m = std::exp(-w.real());
  if (m * m * nd < 1e-36) return inv;
  return inv - std::polar(m, -w.imag());
}

double delta_bound(Complex w) {
  const double d = 1.0 + w.real();
  return 4.0 * std::norm(w) / (d * d * d);
}

Complex laplace_power_tail(Complex z, double L, double q) {
  const double m = std::abs(z);
  if (m == 0.0) {
    if (!(q < -1.0)) throw AdmissibilityError("power tail is not integrable");
    return std::pow(L, q + 1.0) / (-q - 1.0);
  }
  const Complex d = std::conj(z) / m;
  auto g = [&](double x) { return std::exp(-x) * std::pow(Complex(L) + x * d / m, q); };
  QuadTol tol;
  tol.abs = 0.0;
  tol.rel = 1e-14;
  auto res = gauss_kronrod(g, 0.0, 60.0, tol, 6);
  return d / m * std::exp(-z * L) * res.value;
}

Complex rational_power_tail(Complex lambda, double L, double q, int j, int m) {
  const Complex x = 1.0 / (lambda * L);
  if (std::abs(x) > 0.5) throw DomainError("rational_power_tail: L too small for the expansion");
  const double e = q + j - m + 1.0;
  if (!(e < 0.0)) throw AdmissibilityError("power tail is not integrable against the kernel");
  Complex sum = 0.0, xn = 1.0;
  double coef = 1.0;
  for (int n = 0; n < 400; ++n) {
    if (n > 0) {
      coef *= -double(m + n - 1) / n;
      xn *= x;
    }
    const Complex term = coef * xn / (double(m + n) - q - j - 1.0);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return std::pow(lambda, -m) * std::pow(L, e) * sum;
}

Complex stieltjes_power_tail(Complex lambda, double L, double q) {
  const Complex x = -lambda / L;
  if (std::abs(x) > 0.5) throw DomainError("stieltjes_power_tail: L too small for the expansion");
  if (!(q < 0.0)) throw AdmissibilityError("power tail is not integrable against the kernel");
  Complex sum = 0.0, xn = 1.0;
  for (int n = 0; n < 400; ++n) {
    if (n > 0) xn *= x;
    const Complex term = xn / (n - q);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return lambda * std::pow(L, q) * sum;
}

namespace {

Complex rational_exp_from(Complex lambda, double r, double l, int m) {
  const Complex u0 = 1.0 + lambda * l;
  const Complex zeta = r / lambda * u0;
  return std::pow(u0, 1.0 - m) * std::exp(-r * l) * expint_scaled(m, zeta) / lambda;
}

bool rational_closed_form_ok(Complex lambda, double r, double l) {
  if (lambda.real() < 0.0 || lambda == Complex(0.0)) return false;
  return std::abs(lambda) * (l + 1.0 / r) >= 0.05;
}

}  // namespace

Complex rational_exp_integral(Complex lambda, double r, double l, double u, int m) {
  Complex v = rational_exp_from(lambda, r, l, m);
  if (std::isfinite(u)) v -= rational_exp_from(lambda, r, u, m);
  return v;
}

namespace {

// Closed forms lose accuracy when the kernel barely varies over the segment.
bool laplace_closed_form_ok(Complex w, double l, double u, double r) {
  if (l == 0.0 && !std::isfinite(u)) return true;
  const double width = std::max(l, std::min(u, r > 0.0 ? 1.0 / r : u));
  return std::abs(w) * width >= 0.05;
}

// int_l^u s^q e^{-r s} ds
std::optional<double> term_mass(double l, double u, double q, double r) {
  if (r > 0.0) {
    if (l == 0.0 && !(q > -1.0)) return std::nullopt;
    return laplace_power(r, l, u, q).real();
  }
  if (std::isfinite(u)) {
    if (l == 0.0) return std::nullopt;
    return q == -1.0 ? std::log(u / l) : (std::pow(u, q + 1.0) - std::pow(l, q + 1.0)) / (q + 1.0);
  }
  if (!(q < -1.0) || l == 0.0) return std::nullopt;
  return std::pow(l, q + 1.0) / (-q - 1.0);
}

}  // namespace

Complex laplace_power(Complex w, double l, double u, double q) {
  Complex v;
  if (l == 0.0) {
    if (!(q > -1.0)) throw AdmissibilityError("power density is not integrable at 0");
    v = boost::math::tgamma(q + 1.0) * std::pow(w, -q - 1.0);
  } else {
    v = laplace_power_tail(w, l, q);
  }
  if (std::isfinite(u)) v -= laplace_power_tail(w, u, q);
  return v;
}

std::optional<Complex> LaplaceKernel::exp_segment(double l, double u, const DensityTerm& t) const {
  const Complex w = t.decay + z;
  if (std::abs(w) < 1e-300) return std::nullopt;
  if (t.power == 0.0) {
    const Complex hi = std::isfinite(u) ? std::exp(-w * u) : Complex(0.0);
    return t.coef * (std::exp(-w * l) - hi) / w;
  }
  if (!laplace_closed_form_ok(w, l, u, t.decay) || (l == 0.0 && !(t.power > -1.0))) return std::nullopt;
  return t.coef * laplace_power(w, l, u, t.power);
}

std::optional<Complex> LevyKernel::exp_segment(double l, double u, const DensityTerm& t) const {
  const double r = t.decay, q = t.power;
  if (z == Complex(0.0)) return Complex(0.0);
  const Complex w = r + z;
  if (q == 0.0 && r > 0.0) {
    auto f = [&](double s) { return std::exp(-r * s) * (z - r * cexpm1(-z * s)) / (r * w); };
    Complex v = f(l);
    if (std::isfinite(u)) v -= f(u);
    return t.coef * v;
  }
  if (!laplace_closed_form_ok(z, l, u, r)) return std::nullopt;
  if (l > 0.0) {
    auto mass = term_mass(l, u, q, r);
    if (!mass) return std::nullopt;
    return t.coef * (*mass - laplace_power(w, l, u, q));
  }
  if (!(q > -2.0) || (r == 0.0 && !(q < -1.0))) return std::nullopt;
  // int_0^inf (1 - e^{-z s}) s^q e^{-r s} ds
  Complex v;
  if (r > 0.0) {
    const Complex lg = clog1p(z / r);
    v = q == -1.0 ? lg : boost::math::tgamma(q + 1.0) * std::pow(r, -q - 1.0) * -cexpm1(-(q + 1.0) * lg);
  } else {
    v = -boost::math::tgamma(q + 1.0) * std::pow(z, -q - 1.0);
  }
  if (std::isfinite(u)) {
    const Complex m = r > 0.0 ? laplace_power_tail(r, u, q) : Complex(std::pow(u, q + 1.0) / (-q - 1.0));
    v -= m - laplace_power_tail(w, u, q);
  }
  return t.coef * v;
}

std::optional<Complex> LevyDerivativeKernel::exp_segment(double l, double u, const DensityTerm& t) const {
  const Complex w = t.decay + z;
  if (t.power != 0.0) {
    if (!laplace_closed_form_ok(w, l, u, t.decay) || (l == 0.0 && !(t.power + k > -1.0))) return std::nullopt;
    return sign() * t.coef * laplace_power(w, l, u, t.power + k);
  }
  auto G = [&](double s) {
    Complex sum = 0.0;
    double fk = 1.0;
    for (int i = 2; i <= k; ++i) fk *= i;
    double fj = 1.0;
    for (int j = 0; j <= k; ++j) {
      if (j > 0) fj *= j;
      sum += fk / fj * std::pow(s, j) / std::pow(w, k - j + 1);
    }
    return std::exp(-w * s) * sum;
  };
  Complex v = G(l);
  if (std::isfinite(u)) v -= G(u);
  return sign() * t.coef * v;
}

std::optional<Complex> ARepKernel::exp_segment(double l, double u, const DensityTerm& t) const {
  const double r = t.decay;
  if (t.power != 0.0 || !(r > 0.0) || !rational_closed_form_ok(lambda, r, l)) return std::nullopt;
  const Complex i1 = rational_exp_integral(lambda, r, l, u, 1);
  switch (d) {
    case 0: {
      const double mass = (std::exp(-r * l) - (std::isfinite(u) ? std::exp(-r * u) : 0.0)) / r;
      return t.coef * (mass - i1);
    }
    case 1: return t.coef / lambda * (i1 - rational_exp_integral(lambda, r, l, u, 2));
    default: {
      const Complex i2 = rational_exp_integral(lambda, r, l, u, 2);
      const Complex i3 = rational_exp_integral(lambda, r, l, u, 3);
      return -2.0 * t.coef / (lambda * lambda) * (i1 - 2.0 * i2 + i3);
    }
  }
}

namespace {

// 1/(1 + lambda s), Re lambda >= 0
struct RationalKernel {
  using value_type = Complex;
  Complex lambda;
  Complex zero() const { return 0.0; }
  Complex operator()(double s) const {
    const Complex d = 1.0 + lambda * s;
    return std::conj(d) / std::norm(d);
  }
  Complex reduced(double s) const { return (*this)(s); }
  int order_at_zero() const { return 0; }
  double scale() const { return std::abs(lambda); }
  double bound(double s) const { return 1.0 / std::max(1.0, std::abs(lambda) * s); }
  double tail_decay() const { return 1.0; }
};

}  // namespace

std::optional<Complex> DeltaKernel::exp_segment(double l, double u, const DensityTerm& t) const {
  const double r = t.decay;
  if (t.power != 0.0 && r > 0.0 && !std::isfinite(u) && lambda.real() >= 0.0 && lambda != Complex(0.0)) {
    // the oscillating e^{-lambda s} part has a closed form past h
    const QuadTol tol{1e-13, 1e-11, 2000};
    const double h = std::max(l, 1.0 / std::abs(lambda));
    Complex v = 0.0;
    if (h > l) {
      DensitySegment head;
      head.lower = l;
      head.upper = h;
      head.term = t;
      head.endpoint_exponent = l == 0.0 ? t.power : 0.0;
      v += integrate_segment(*this, head, tol);
    }
    DensitySegment tail;
    tail.lower = h;
    tail.term = t;
    v += integrate_segment(RationalKernel{lambda}, tail, tol);
    return v - t.coef * laplace_power_tail(lambda + r, h, t.power);
  }
  if (t.power != 0.0 || !(r > 0.0) || !rational_closed_form_ok(lambda, r, l)) return std::nullopt;
  const Complex w = r + lambda;
  Complex e = std::exp(-w * l);
  if (std::isfinite(u)) e -= std::exp(-w * u);
  return t.coef * (rational_exp_integral(lambda, r, l, u, 1) - e / w);
}

}  // namespace bfcalc
