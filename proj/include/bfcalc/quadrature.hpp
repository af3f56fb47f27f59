#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "bfcalc/types.hpp"

namespace bfcalc {

struct Rule {
  std::vector<double> x;
  std::vector<double> w;
};

// Gauss-Legendre nodes on [-1, 1]. Cached, thread-safe.
const Rule& gauss_legendre(int n);

// Nodes on [0, 1] for the weight t^a, a > -1. Cached, thread-safe.
const Rule& gauss_jacobi01(int n, double a);

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const Complex& v) { return std::abs(v); }
template <class Derived>
double magnitude(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

template <class V>
struct QuadResult {
  V value;
  double error = 0.0;
  int evaluations = 0;
  bool converged = true;
};

namespace detail {

inline constexpr double gk_x[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double gk_wk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double gk_wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class V>
struct Panel {
  double a, b;
  V value;
  double error;
};

template <class F>
auto gk15(F& f, double a, double b) {
  using V = std::decay_t<decltype(f(a))>;
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  V fc = f(c);
  V kron = fc * gk_wk[7];
  V gauss = fc * gk_wg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * gk_x[j];
    V f1 = f(c - dx);
    V f2 = f(c + dx);
    kron += (f1 + f2) * gk_wk[j];
    if (j % 2 == 1) gauss += (f1 + f2) * gk_wg[j / 2];
  }
  kron *= h;
  gauss *= h;
  const double err = magnitude(kron - gauss);
  return Panel<V>{a, b, std::move(kron), err};
}

}  // namespace detail

struct QuadTol {
  double abs = 1e-10;
  double rel = 1e-12;
  int max_panels = 2000;
};

// Globally adaptive Gauss-Kronrod 7/15 over [a, b], starting from `initial` equal panels.
template <class F>
auto gauss_kronrod(F&& f, double a, double b, const QuadTol& tol = {}, int initial = 1) {
  using V = std::decay_t<decltype(f(a))>;
  std::vector<detail::Panel<V>> panels;
  initial = std::max(1, initial);
  const double step = (b - a) / initial;
  for (int i = 0; i < initial; ++i) {
    const double lo = a + i * step;
    const double hi = (i + 1 == initial) ? b : a + (i + 1) * step;
    panels.push_back(detail::gk15(f, lo, hi));
  }
  auto by_error = [](const auto& l, const auto& r) { return l.error < r.error; };
  std::make_heap(panels.begin(), panels.end(), by_error);
  V total = panels.front().value;
  double err = 0.0;
  for (std::size_t i = 0; i < panels.size(); ++i) {
    if (i) total += panels[i].value;
    err += panels[i].error;
  }
  QuadResult<V> out{total, err, int(panels.size()) * 15, true};
  while (err > std::max(tol.abs, tol.rel * magnitude(total))) {
    if (int(panels.size()) >= tol.max_panels) {
      out.converged = false;
      break;
    }
    std::pop_heap(panels.begin(), panels.end(), by_error);
    auto worst = std::move(panels.back());
    panels.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      out.converged = false;
      panels.push_back(std::move(worst));
      std::push_heap(panels.begin(), panels.end(), by_error);
      break;
    }
    auto left = detail::gk15(f, worst.a, mid);
    auto right = detail::gk15(f, mid, worst.b);
    total -= worst.value;
    total += left.value;
    total += right.value;
    err += left.error + right.error - worst.error;
    panels.push_back(std::move(left));
    std::push_heap(panels.begin(), panels.end(), by_error);
    panels.push_back(std::move(right));
    std::push_heap(panels.begin(), panels.end(), by_error);
    out.evaluations += 30;
  }
  if (!out.converged || panels.size() > 64) {
    // resum to shed drift from the running updates
    total = panels.front().value;
    err = 0.0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      if (i) total += panels[i].value;
      err += panels[i].error;
    }
  }
  out.value = total;
  out.error = err;
  return out;
}

// Fixed-order Gauss-Legendre on [a, b] split into `panels` equal pieces.
template <class F>
auto gauss_composite(F&& f, double a, double b, int panels, int order) {
  const Rule& r = gauss_legendre(order);
  const double step = (b - a) / panels;
  using V = std::decay_t<decltype(f(a))>;
  V total = f(a + 0.5 * step) * 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * step;
    const double h = 0.5 * step, c = lo + h;
    for (std::size_t i = 0; i < r.x.size(); ++i) total += f(c + h * r.x[i]) * (h * r.w[i]);
  }
  return total;
}

}  // namespace bfcalc
