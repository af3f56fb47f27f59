#include "bfcalc/special.hpp"

#include <cmath>

namespace bfcalc {

Complex cexpm1(Complex w) {
  const double x = w.real(), y = w.imag();
  const double em1 = std::expm1(x);
  const double s = std::sin(0.5 * y);
  return {em1 * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

Complex one_minus_exp_over(Complex w) {
  if (std::abs(w) < 1e-3) {
    // 1 - w/2 + w^2/6 - w^3/24 + w^4/120
    return 1.0 + w * (-0.5 + w * (1.0 / 6.0 + w * (-1.0 / 24.0 + w / 120.0)));
  }
  return -cexpm1(-w) / w;
}

double arg0(Complex z) {
  if (z == Complex(0.0, 0.0)) return 0.0;
  return std::arg(z);
}

Complex expint_scaled(int n, Complex w) {
  if (n < 1) throw DomainError("expint_scaled: order must be >= 1");
  if (w.real() <= 0.0 && w.imag() == 0.0) throw DomainError("expint_scaled: argument on the branch cut");
  constexpr double eps = 1e-16;
  constexpr double euler = 0.57721566490153286061;
  constexpr int max_iter = 10000;
  const int nm1 = n - 1;
  if (std::abs(w) >= 1.0) {
    // modified Lentz on the continued fraction for e^w E_n(w)
    Complex b = w + double(n);
    Complex c = 1.0 / 1e-300;
    Complex d = 1.0 / b;
    Complex h = d;
    for (int i = 1; i <= max_iter; ++i) {
      const double an = -double(i) * double(nm1 + i);
      b += 2.0;
      d = 1.0 / (an * d + b);
      c = b + an / c;
      const Complex del = c * d;
      h *= del;
      if (std::abs(del - 1.0) < eps) return h;
    }
    throw QuadratureError("expint_scaled: continued fraction did not converge", std::abs(h));
  }
  Complex ans = nm1 != 0 ? Complex(1.0 / nm1) : -std::log(w) - euler;
  Complex fact = 1.0;
  for (int i = 1; i <= max_iter; ++i) {
    fact *= -w / double(i);
    Complex del;
    if (i != nm1) {
      del = -fact / double(i - nm1);
    } else {
      double psi = -euler;
      for (int ii = 1; ii <= nm1; ++ii) psi += 1.0 / ii;
      del = fact * (-std::log(w) + psi);
    }
    ans += del;
    if (std::abs(del) < std::abs(ans) * eps) return std::exp(w) * ans;
  }
  throw QuadratureError("expint_scaled: series did not converge", std::abs(ans));
}

Complex clog1p(Complex z) {
  const double x = z.real(), y = z.imag();
  return {0.5 * std::log1p(2.0 * x + x * x + y * y), std::atan2(y, 1.0 + x)};
}

}  // namespace bfcalc
