#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "bfcalc/quadrature.hpp"
#include "bfcalc/types.hpp"

namespace bfcalc {

struct Atom {
  double location;
  double mass;
};

// C s^q e^{-r s}
struct DensityTerm {
  double coef = 1.0;
  double power = 0.0;
  double decay = 0.0;
  double operator()(double s) const {
    if (power == 0.0) return coef * std::exp(-decay * s);
    return coef * std::exp(power * std::log(s) - decay * s);
  }
};

// Describes the density on [start, inf). `exact` means density == envelope there,
// otherwise envelope is only an upper bound used for truncation.
struct TailDescriptor {
  double start = 1.0;
  DensityTerm envelope;
  bool exact = false;
};

struct DensitySegment {
  double lower = 0.0;
  double upper = inf;
  std::function<double(double)> density;
  double endpoint_exponent = 0.0;  // density ~ s^q as s -> 0 when lower == 0
  int order = 16;
  std::optional<DensityTerm> term;  // density is exactly this term on the segment
  std::optional<TailDescriptor> tail;

  double operator()(double s) const { return density ? density(s) : (*term)(s); }
  // density(s) / s^endpoint_exponent, smooth at 0
  double regular_part(double s) const {
    if (term) return term->coef * std::pow(s, term->power - endpoint_exponent) * std::exp(-term->decay * s);
    return density(s) * std::pow(s, -endpoint_exponent);
  }
};

class RadonMeasure {
 public:
  RadonMeasure() = default;
  RadonMeasure(std::vector<Atom> atoms, std::vector<DensitySegment> segments);

  static RadonMeasure dirac(double location, double mass = 1.0);
  // C s^q e^{-r s} on [lower, upper)
  static RadonMeasure from_term(double lower, double upper, DensityTerm term, int order = 16);

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<DensitySegment>& segments() const { return segments_; }
  bool empty() const { return atoms_.empty() && segments_.empty(); }
  bool compactly_supported() const;

  RadonMeasure scaled(double c) const;
  RadonMeasure operator+(const RadonMeasure& other) const;
  RadonMeasure restricted(double lo, double hi) const;
  // image under s -> 1/s
  RadonMeasure reciprocal() const;

  // require_disjoint applies to a single user specification; sums may overlap.
  void validate(bool require_disjoint = false) const;

 private:
  std::vector<Atom> atoms_;
  std::vector<DensitySegment> segments_;
};

// ---------------------------------------------------------------------------
// Kernel integration.
//
// A kernel K provides
//   value_type operator()(double s), value_type reduced(double s) = k(s)/s^v,
//   int order_at_zero() (v), double scale() (inverse characteristic length),
//   double bound(double s) (sup of |k| on [s, inf)), value_type zero().
// Optionally
//   value_type power_tail(double L, double C, double q)  = int_L^inf k(s) C s^q ds
//   double power_tail_start()
//   std::optional<value_type> exp_segment(double l, double u, const DensityTerm&), closed form on a term segment

template <class K>
concept HasPowerTail = requires(const K& k) {
  k.power_tail(1.0, 1.0, -1.5);
  k.power_tail_start();
};

// |k(s)| <= bound(S) (S/s)^p for s >= S, with p = tail_decay()
template <class K>
concept HasTailDecay = requires(const K& k) { k.tail_decay(); };

template <class K>
concept HasExpSegment = requires(const K& k, const DensityTerm& t) { k.exp_segment(0.0, 1.0, t); };

namespace detail {

// int_S^inf C s^q e^{-r s} ds
inline double envelope_tail(const DensityTerm& e, double S) {
  const double C = std::abs(e.coef), q = e.power, r = e.decay;
  if (r > 0.0) {
    if (q > -1.0) return C * boost::math::tgamma(q + 1.0, r * S) / std::pow(r, q + 1.0);
    return C * std::pow(S, q) * std::exp(-r * S) / r;
  }
  if (q < -1.0) return C * std::pow(S, q + 1.0) / (-q - 1.0);
  return inf;
}

template <class K, class F>
auto log_integral(const K& k, F&& dens, double lo, double hi, const QuadTol& tol) {
  using V = typename K::value_type;
  const double xa = std::log(lo), xb = std::log(hi);
  auto g = [&](double x) -> V {
    const double s = std::exp(x);
    return k(s) * (dens(s) * s);
  };
  const int initial = std::max(1, int(std::ceil(xb - xa)));
  auto res = gauss_kronrod(g, xa, xb, tol, initial);
  if (!res.converged) throw QuadratureError("log-panel quadrature did not converge", res.error);
  return res.value;
}

}  // namespace detail

template <class K>
typename K::value_type integrate_segment(const K& k, const DensitySegment& seg, const QuadTol& tol) {
  using V = typename K::value_type;
  if constexpr (HasExpSegment<K>) {
    if (seg.term) {
      if (auto v = k.exp_segment(seg.lower, seg.upper, *seg.term)) return *v;
    }
  }
  V total = k.zero();
  const double sc = k.scale() > 0.0 ? k.scale() : 1.0;
  double lo = seg.lower;
  if (seg.lower == 0.0) {
    double h = std::min({seg.upper, 0.5 / sc, 1.0});
    if (seg.term && seg.term->decay > 0.0) h = std::min(h, 1.0 / seg.term->decay);
    const int v = k.order_at_zero();
    const double a = seg.endpoint_exponent + v;
    if (!(a > -1.0)) throw AdmissibilityError("measure is not integrable against the kernel at 0");
    auto head = [&](int n) {
      const Rule& r = gauss_jacobi01(n, a);
      V acc = k.zero();
      for (std::size_t i = 0; i < r.x.size(); ++i) {
        const double s = h * r.x[i];
        acc += k.reduced(s) * (seg.regular_part(s) * r.w[i]);
      }
      return V(acc * std::pow(h, a + 1.0));
    };
    int n = std::max(8, seg.order);
    V prev = head(n);
    while (true) {
      n *= 2;
      V cur = head(n);
      const double diff = magnitude(V(cur - prev));
      prev = cur;
      if (diff <= std::max(tol.abs, tol.rel * magnitude(cur))) break;
      if (n >= 512) throw QuadratureError("endpoint rule did not converge", diff);
    }
    total += prev;
    lo = h;
    if (lo >= seg.upper) return total;
  }
  auto dens = [&](double s) { return seg(s); };
  if (std::isfinite(seg.upper)) {
    total += detail::log_integral(k, dens, lo, seg.upper, tol);
    return total;
  }
  std::optional<TailDescriptor> tail = seg.tail;
  if (seg.term) tail = TailDescriptor{seg.lower, *seg.term, true};
  if (!tail) throw AdmissibilityError("unbounded segment without a tail descriptor");
  double T = std::max(lo, tail->start);
  if (T > lo) total += detail::log_integral(k, dens, lo, T, tol);
  const DensityTerm& env = tail->envelope;
  if constexpr (HasPowerTail<K>) {
    if (tail->exact && env.decay == 0.0) {
      const double L = std::max(T, k.power_tail_start());
      if (L > T) total += detail::log_integral(k, dens, T, L, tol);
      total += k.power_tail(L, env.coef, env.power);
      return total;
    }
  }
  double S = T;
  for (int step = 0; step < 2000; ++step) {
    double rem;
    if constexpr (HasTailDecay<K>) {
      const double p = k.tail_decay();
      rem = k.bound(S) * std::pow(S, p) * detail::envelope_tail({env.coef, env.power - p, env.decay}, S);
    } else {
      rem = k.bound(S) * detail::envelope_tail(env, S);
    }
    if (rem <= 0.1 * std::max(tol.abs, tol.rel * magnitude(total))) return total;
    if (!std::isfinite(rem) && step > 0 && S > 1e12)
      throw AdmissibilityError("tail of the measure is not integrable against the kernel");
    const double next = S * (S < 1e-300 ? 1e10 : std::exp(1.0));
    total += detail::log_integral(k, dens, S, next, tol);
    S = next;
    if (S > 1e280) break;
  }
  throw QuadratureError("tail truncation did not converge", magnitude(total));
}

template <class K>
typename K::value_type integrate_measure(const K& k, const RadonMeasure& m, const QuadTol& tol = {}) {
  using V = typename K::value_type;
  V total = k.zero();
  for (const auto& a : m.atoms()) total += k(a.location) * a.mass;
  for (const auto& seg : m.segments()) total += integrate_segment(k, seg, tol);
  return total;
}

// Real scalar kernel wrapper for moments and masses.
struct RealKernel {
  using value_type = double;
  std::function<double(double)> f;
  std::function<double(double)> f_reduced;
  int v = 0;
  double sc = 1.0;
  double sup = 1.0;
  double zero() const { return 0.0; }
  double operator()(double s) const { return f(s); }
  double reduced(double s) const { return f_reduced ? f_reduced(s) : f(s) / std::pow(s, v); }
  int order_at_zero() const { return v; }
  double scale() const { return sc; }
  double bound(double) const { return sup; }
};

// int s/(1+s) mu(ds); throws AdmissibilityError when infinite.
double levy_admissibility(const RadonMeasure& mu);
// int 1/(1+s) sigma(ds)
double stieltjes_admissibility(const RadonMeasure& sigma);
double total_mass(const RadonMeasure& m);
double first_moment(const RadonMeasure& m);

}  // namespace bfcalc
