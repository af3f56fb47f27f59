#include <cmath>

#include <boost/math/special_functions/expint.hpp>

#include "bfcalc/kernels.hpp"
#include "bfcalc/quadrature.hpp"
#include "bfcalc/special.hpp"
#include "doctest.h"

using namespace bfcalc;

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  for (int n : {1, 2, 5, 16, 40}) {
    const Rule& r = gauss_legendre(n);
    for (int k = 0; k < 2 * n; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += r.w[i] * std::pow(r.x[i], k);
      const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
      CHECK(s == doctest::Approx(exact).epsilon(1e-13));
    }
  }
}

TEST_CASE("gauss-jacobi moments") {
  for (double a : {-0.9, -0.5, 0.0, 0.3, 2.5}) {
    const Rule& r = gauss_jacobi01(12, a);
    for (int k = 0; k < 24; ++k) {
      double s = 0.0;
      for (int i = 0; i < 12; ++i) s += r.w[i] * std::pow(r.x[i], k);
      CHECK(s == doctest::Approx(1.0 / (a + k + 1.0)).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(gauss_jacobi01(8, -1.0), AdmissibilityError);
}

TEST_CASE("adaptive kronrod") {
  auto r = gauss_kronrod([](double x) { return std::sin(x); }, 0.0, pi);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-13));
  auto s = gauss_kronrod([](double x) { return std::sqrt(x); }, 0.0, 1.0);
  CHECK(s.value == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  auto m = gauss_kronrod(
      [](double x) {
        Eigen::MatrixXcd M(1, 2);
        M << Complex(x, 0.0), Complex(0.0, x * x);
        return M;
      },
      0.0, 3.0);
  CHECK(std::abs(m.value(0, 0) - 4.5) < 1e-12);
  CHECK(std::abs(m.value(0, 1) - Complex(0.0, 9.0)) < 1e-12);
}

TEST_CASE("cexpm1 is accurate near zero") {
  const Complex w(1e-9, -2e-9);
  const Complex series = w + w * w / 2.0 + w * w * w / 6.0;
  CHECK(std::abs(cexpm1(w) - series) < 1e-24);
  CHECK(std::abs(cexpm1(Complex(1.0, 2.0)) - (std::exp(Complex(1.0, 2.0)) - 1.0)) < 1e-14);
}

TEST_CASE("scaled exponential integral against boost on the real axis") {
  for (int n : {1, 2, 3}) {
    for (double x : {0.01, 0.3, 0.99, 1.0, 2.5, 30.0, 400.0}) {
      const double ref = std::exp(x) * boost::math::expint(n, x);
      CHECK(expint_scaled(n, x).real() == doctest::Approx(ref).epsilon(1e-13));
      CHECK(std::abs(expint_scaled(n, x).imag()) < 1e-15 * ref);
    }
  }
}

TEST_CASE("scaled exponential integral off the axis matches direct quadrature") {
  for (Complex w : {Complex(0.2, 0.5), Complex(1.5, -3.0), Complex(0.0, 4.0), Complex(10.0, 10.0)}) {
    for (int n : {1, 2, 3}) {
      // e^w E_n(w) = int_0^inf e^{-w t} (1+t)^{-n} dt, taken along the ray t = x conj(w)/|w|
      const Complex d = std::conj(w) / std::abs(w);
      auto r = gauss_kronrod([&](double x) { return d * std::exp(-std::abs(w) * x) * std::pow(1.0 + x * d, -n); },
                             0.0, 60.0 / std::abs(w), QuadTol{1e-15, 1e-14, 20000}, 16);
      CHECK(std::abs(expint_scaled(n, w) - r.value) < 1e-10);
    }
  }
}

TEST_CASE("laplace power tail") {
  // int_2^inf e^{-s} s^{-2} ds = e^{-2}/2 - E_1(2)
  const double ref = std::exp(-2.0) / 2.0 - boost::math::expint(1, 2.0);
  CHECK(laplace_power_tail(1.0, 2.0, -2.0).real() == doctest::Approx(ref).epsilon(1e-12));
  // purely imaginary argument against a direct oscillatory sum
  const Complex z(0.0, 3.0);
  const Complex v = laplace_power_tail(z, 1.0, -1.5);
  auto r = gauss_kronrod([&](double s) { return std::exp(-z * s) * std::pow(s, -1.5); }, 1.0, 4000.0,
                         QuadTol{1e-13, 1e-13, 20000}, 4000);
  // the neglected piece beyond 4000 has modulus about 4000^{-1.5}/3
  CHECK(std::abs(v - r.value) < 2e-6);
}

TEST_CASE("rational and stieltjes power tails match direct quadrature") {
  const Complex lam(0.7, 0.4);
  const double L = 10.0, q = -1.3;
  auto direct = [&](auto f) {
    return gauss_kronrod([&](double x) { return f(std::exp(x)) * std::exp(x); }, std::log(L), 200.0,
                         QuadTol{1e-15, 1e-13, 20000}, 200)
        .value;
  };
  CHECK(std::abs(rational_power_tail(lam, L, q, 0, 1) -
                 direct([&](double s) { return std::pow(s, q) / (1.0 + lam * s); })) < 1e-12);
  CHECK(std::abs(rational_power_tail(lam, L, q, 2, 3) -
                 direct([&](double s) { return std::pow(s, q + 2) / std::pow(1.0 + lam * s, 3); })) < 1e-12);
  CHECK(std::abs(stieltjes_power_tail(lam, L, -0.5) -
                 direct([&](double s) { return std::pow(s, -0.5) * lam / (lam + s); })) < 1e-10);
}

TEST_CASE("power-term closed forms agree with plain quadrature") {
  struct Case {
    double l, u;
    DensityTerm t;
  };
  std::vector<Case> cases = {{0.0, inf, {0.5, -1.4, 0.3}}, {0.0, inf, {1.0, -1.0, 2.0}}, {0.0, inf, {1.0, 0.7, 1.5}},
                             {0.0, 3.0, {0.8, -1.6, 0.5}}, {0.2, inf, {1.0, -0.5, 0.4}}, {0.5, 4.0, {1.0, -2.5, 0.0}},
                             {0.5, inf, {2.0, -1.5, 0.0}}, {0.0, 2.0, {1.0, -1.3, 0.0}}};
  for (const auto& c : cases) {
    DensitySegment plain;
    plain.lower = c.l;
    plain.upper = c.u;
    plain.density = [t = c.t](double s) { return t(s); };
    plain.endpoint_exponent = c.l == 0.0 ? c.t.power : 0.0;
    plain.tail = TailDescriptor{std::max(c.l, 1.0), c.t, false};
    const DensitySegment fast = RadonMeasure::from_term(c.l, c.u, c.t).segments().front();
    for (Complex z : {Complex(0.3, 0.0), Complex(2.0, 5.0), Complex(0.0, 3.0), Complex(40.0, -10.0)}) {
      // the reference has no usable tail for undamped oscillation
      if (z.real() == 0.0 && c.t.decay == 0.0 && !std::isfinite(c.u)) continue;
      QuadTol tol;
      tol.abs = 1e-13;
      tol.rel = 1e-12;
      tol.max_panels = 100000;
      const Complex a = integrate_segment(LevyKernel{z}, fast, tol);
      const Complex b = integrate_segment(LevyKernel{z}, plain, tol);
      CHECK_MESSAGE(std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)), "levy l=" << c.l << " q=" << c.t.power << " z=" << z);
      if (c.l > 0.0 || c.t.power > -1.0) {
        const Complex e = integrate_segment(LaplaceKernel{z}, fast, tol);
        const Complex f = integrate_segment(LaplaceKernel{z}, plain, tol);
        CHECK_MESSAGE(std::abs(e - f) <= 1e-9 * std::max(1.0, std::abs(f)), "laplace l=" << c.l << " z=" << z);
      }
      if (z.real() > 0.0) {
        const Complex g = integrate_segment(LevyDerivativeKernel{z, 2}, fast, tol);
        const Complex h = integrate_segment(LevyDerivativeKernel{z, 2}, plain, tol);
        CHECK_MESSAGE(std::abs(g - h) <= 1e-9 * std::max(1.0, std::abs(h)), "deriv l=" << c.l << " z=" << z);
      }
    }
  }
}
