#pragma once

#include <cmath>
#include <optional>

#include "bfcalc/measure.hpp"
#include "bfcalc/special.hpp"

namespace bfcalc {

// int_L^inf e^{-z s} s^q ds, Re z >= 0. Integrates along the ray s = L + t conj(z)/|z|.
Complex laplace_power_tail(Complex z, double L, double q);

// int_l^u e^{-w s} s^q ds, Re w >= 0; l = 0 needs q > -1.
Complex laplace_power(Complex w, double l, double u, double q);

// int_L^inf s^{q+j} (1 + lambda s)^{-m} ds by the expansion in 1/(lambda s); needs |lambda| L >= 2.
Complex rational_power_tail(Complex lambda, double L, double q, int j, int m);

// int_L^inf s^q lambda/(lambda + s) ds; needs L >= 2|lambda|.
Complex stieltjes_power_tail(Complex lambda, double L, double q);

// int_l^u e^{-r s} (1 + lambda s)^{-m} ds for Re lambda >= 0, lambda != 0, u may be inf.
Complex rational_exp_integral(Complex lambda, double r, double l, double u, int m);

// Delta(w) = 1/(1+w) - e^{-w}
Complex delta(Complex w);
double delta_bound(Complex w);

// 1 - e^{-z s}
struct LevyKernel {
  using value_type = Complex;
  Complex z;
  Complex zero() const { return 0.0; }
  Complex operator()(double s) const { return -cexpm1(-z * s); }
  Complex reduced(double s) const { return z * one_minus_exp_over(z * s); }
  int order_at_zero() const { return 1; }
  double scale() const { return std::abs(z) > 0.0 ? std::abs(z) : 1.0; }
  double bound(double) const { return 2.0; }
  double power_tail_start() const { return 0.0; }
  Complex power_tail(double L, double C, double q) const {
    if (z == Complex(0.0)) return 0.0;
    return C * (std::pow(L, q + 1.0) / (-q - 1.0) - laplace_power_tail(z, L, q));
  }
  std::optional<Complex> exp_segment(double l, double u, const DensityTerm& t) const;
};

// (-1)^{k+1} s^k e^{-z s}
struct LevyDerivativeKernel {
  using value_type = Complex;
  Complex z;
  int k;
  double sign() const { return k % 2 == 1 ? 1.0 : -1.0; }
  Complex zero() const { return 0.0; }
  Complex operator()(double s) const { return sign() * std::pow(s, k) * std::exp(-z * s); }
  Complex reduced(double s) const { return sign() * std::exp(-z * s); }
  int order_at_zero() const { return k; }
  double scale() const { return std::abs(z); }
  double bound(double s) const {
    const double x = z.real();
    const double t = std::max(s, k / x);
    return std::pow(t, k) * std::exp(-x * t);
  }
  double power_tail_start() const { return 0.0; }
  Complex power_tail(double L, double C, double q) const { return sign() * C * laplace_power_tail(z, L, q + k); }
  std::optional<Complex> exp_segment(double l, double u, const DensityTerm& t) const;
};

// e^{-z s}
struct LaplaceKernel {
  using value_type = Complex;
  Complex z;
  Complex zero() const { return 0.0; }
  Complex operator()(double s) const { return std::exp(-z * s); }
  Complex reduced(double s) const { return std::exp(-z * s); }
  int order_at_zero() const { return 0; }
  double scale() const { return std::abs(z) > 0.0 ? std::abs(z) : 1.0; }
  double bound(double s) const { return std::exp(-z.real() * s); }
  double power_tail_start() const { return 0.0; }
  Complex power_tail(double L, double C, double q) const { return C * laplace_power_tail(z, L, q); }
  std::optional<Complex> exp_segment(double l, double u, const DensityTerm& t) const;
};

// Kernels of the associated function: d-th lambda-derivative of lambda s/(1 + lambda s).
struct ARepKernel {
  using value_type = Complex;
  Complex lambda;
  int d = 0;
  double sector_factor() const {
    if (lambda.real() >= 0.0) return 1.0;
    return std::abs(std::sin(std::arg(lambda)));
  }
  Complex zero() const { return 0.0; }
  Complex operator()(double s) const {
    const Complex den = 1.0 + lambda * s;
    switch (d) {
      case 0: return lambda * s / den;
      case 1: return s / (den * den);
      default: return -2.0 * s * s / (den * den * den);
    }
  }
  Complex reduced(double s) const {
    const Complex den = 1.0 + lambda * s;
    switch (d) {
      case 0: return lambda / den;
      case 1: return 1.0 / (den * den);
      default: return -2.0 / (den * den * den);
    }
  }
  int order_at_zero() const { return d == 2 ? 2 : 1; }
  double scale() const { return std::abs(lambda); }
  double bound(double s) const {
    const double c = sector_factor(), m = std::abs(lambda);
    switch (d) {
      case 0: return 1.0 / c;
      case 1: return 1.0 / (c * c * m * m * s);
      default: return 2.0 / (c * c * c * m * m * m * s);
    }
  }
  double tail_decay() const { return d == 0 ? 0.0 : 1.0; }
  double power_tail_start() const { return 4.0 / std::abs(lambda); }
  Complex power_tail(double L, double C, double q) const {
    switch (d) {
      case 0: return C * (std::pow(L, q + 1.0) / (-q - 1.0) - rational_power_tail(lambda, L, q, 0, 1));
      case 1: return C * rational_power_tail(lambda, L, q, 1, 2);
      default: return -2.0 * C * rational_power_tail(lambda, L, q, 2, 3);
    }
  }
  std::optional<Complex> exp_segment(double l, double u, const DensityTerm& t) const;
};

// Delta(lambda s)
struct DeltaKernel {
  using value_type = Complex;
  Complex lambda;
  Complex zero() const { return 0.0; }
  Complex operator()(double s) const { return delta(lambda * s); }
  Complex reduced(double s) const { return delta(lambda * s) / (s * s); }
  int order_at_zero() const { return 2; }
  double scale() const { return std::abs(lambda); }
  double bound(double s) const {
    const double c = lambda.real() >= 0.0 ? 1.0 : std::abs(std::sin(std::arg(lambda)));
    return 1.0 / (c * std::max(1.0, std::abs(lambda) * s)) + std::exp(-lambda.real() * s);
  }
  double power_tail_start() const { return 4.0 / std::abs(lambda); }
  Complex power_tail(double L, double C, double q) const {
    return C * (rational_power_tail(lambda, L, q, 0, 1) - laplace_power_tail(lambda, L, q));
  }
  std::optional<Complex> exp_segment(double l, double u, const DensityTerm& t) const;
};

// lambda / (lambda + s)
struct StieltjesKernel {
  using value_type = Complex;
  Complex lambda;
  Complex zero() const { return 0.0; }
  Complex operator()(double s) const { return lambda / (lambda + s); }
  Complex reduced(double s) const { return lambda / (lambda + s); }
  int order_at_zero() const { return 0; }
  double scale() const { return 1.0 / std::abs(lambda); }
  double bound(double s) const {
    const double c = lambda.real() >= 0.0 ? 1.0 : std::abs(std::sin(std::arg(lambda)));
    return std::abs(lambda) / (c * s);
  }
  double tail_decay() const { return 1.0; }
  double power_tail_start() const { return 4.0 * std::abs(lambda); }
  Complex power_tail(double L, double C, double q) const { return C * stieltjes_power_tail(lambda, L, q); }
};

}  // namespace bfcalc
