#include "bfcalc/subordination.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <boost/math/special_functions/digamma.hpp>

namespace bfcalc {

namespace {

constexpr double inv_two_sqrt_pi = 0.28209479177387814;  // 1 / (2 sqrt(pi))

template <class V>
struct FnKernel {
  using value_type = V;
  std::function<V(double)> f;
  V z0;
  double sc = 1.0;
  std::function<double(double)> bnd;
  V zero() const { return z0; }
  V operator()(double s) const { return f(s); }
  V reduced(double s) const { return f(s); }
  int order_at_zero() const { return 0; }
  double scale() const { return sc; }
  double bound(double s) const { return bnd(s); }
};

template <class K>
typename K::value_type integrate_time_measure(const K& k, const TimeMeasure& m, const QuadTol& tol) {
  typename K::value_type total = k.zero();
  for (const auto& a : m.atoms) total += k(a.location) * a.mass;
  if (!m.continuous.empty()) total += integrate_measure(k, m.continuous, tol);
  return total;
}

void require_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("time must be finite and nonnegative");
}

std::vector<Atom> poisson_atoms(double c, double t) {
  std::vector<Atom> out;
  const double m = c * t;
  if (m == 0.0) return {{0.0, 1.0}};
  double cum = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const double p = std::exp(-m + k * std::log(m) - std::lgamma(k + 1.0));
    cum += p;
    if (p > 0.0) out.push_back({double(k), p});
    if (k > m && (1.0 - cum < 1e-17 || p < 1e-300)) break;
  }
  return out;
}

std::vector<Atom> merge(std::vector<Atom> a) {
  std::map<double, double> m;
  for (const auto& x : a) m[x.location] += x.mass;
  std::vector<Atom> out;
  for (auto [l, w] : m) out.push_back({l, w});
  return out;
}

// sampled sup and argmax of s -> g(s) on a log grid, used as a crude kernel bound
std::pair<double, double> sampled_peak(const std::function<double(double)>& g) {
  double best = 0.0, arg = 1.0;
  for (int k = -40; k <= 40; ++k) {
    const double s = std::pow(10.0, k / 10.0);
    const double v = std::abs(g(s));
    if (v > best) best = v, arg = s;
  }
  return {best, arg};
}

}  // namespace

SubordinatorFamily SubordinatorFamily::gamma() { return {Kind::Gamma, 1.0}; }
SubordinatorFamily SubordinatorFamily::stable_half() { return {Kind::StableHalf, 1.0}; }
SubordinatorFamily SubordinatorFamily::identity() { return {Kind::Identity, 1.0}; }

SubordinatorFamily SubordinatorFamily::poisson(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw SpecError("poisson rate c must be positive");
  return {Kind::Poisson, c};
}

SubordinatorFamily SubordinatorFamily::composed(SubordinatorFamily outer, SubordinatorFamily inner) {
  // (a o b) o c = a o (b o c); keeps the outer family elementary
  if (outer.kind_ == Kind::Composed) return composed(outer.outer(), composed(outer.inner(), std::move(inner)));
  SubordinatorFamily f(Kind::Composed, 1.0);
  f.children_ = std::make_shared<const std::pair<SubordinatorFamily, SubordinatorFamily>>(std::move(outer), std::move(inner));
  return f;
}

std::string SubordinatorFamily::name() const {
  switch (kind_) {
    case Kind::Gamma: return "gamma";
    case Kind::StableHalf: return "stable_half";
    case Kind::Poisson: return "poisson(" + std::to_string(c_) + ")";
    case Kind::Identity: return "identity";
    case Kind::Composed: return "composed(" + outer().name() + ", " + inner().name() + ")";
  }
  return "";
}

BernsteinFn SubordinatorFamily::psi() const {
  switch (kind_) {
    case Kind::Gamma: return BernsteinFn::log1p();
    case Kind::StableHalf: return BernsteinFn::power(0.5);
    case Kind::Poisson: return BernsteinFn::one_minus_exp(c_, 1.0);
    case Kind::Identity: return BernsteinFn::affine(0.0, 1.0);
    case Kind::Composed: return BernsteinFn::compose(outer().psi(), inner().psi());
  }
  throw UnsupportedError("unknown family");
}

bool SubordinatorFamily::has_density() const {
  switch (kind_) {
    case Kind::Gamma:
    case Kind::StableHalf: return true;
    case Kind::Poisson:
    case Kind::Identity: return false;
    case Kind::Composed:
      if (outer().kind_ == Kind::Identity) return inner().has_density();
      if (inner().kind_ == Kind::Identity) return outer().has_density();
      return inner().has_density();
  }
  return false;
}

double SubordinatorFamily::density(double t, double s) const {
  if (!(t > 0.0)) throw DomainError("density needs t > 0");
  if (!(s > 0.0)) throw DomainError("density needs s > 0");
  switch (kind_) {
    case Kind::Gamma: return std::exp((t - 1.0) * std::log(s) - s - std::lgamma(t));
    case Kind::StableHalf: return t * inv_two_sqrt_pi * std::pow(s, -1.5) * std::exp(-t * t / (4.0 * s));
    case Kind::Poisson:
    case Kind::Identity: throw UnsupportedError(name() + " is purely atomic; use atoms()");
    case Kind::Composed: break;
  }
  const auto& o = outer();
  const auto& in = inner();
  if (o.kind_ == Kind::Identity) return in.density(t, s);
  if (in.kind_ == Kind::Identity) return o.density(t, s);
  if (!in.has_density()) throw UnsupportedError("inner family has no density");
  double total = 0.0;
  for (const auto& a : o.atoms(t))
    if (a.location > 0.0) total += a.mass * in.density(a.location, s);
  const TimeMeasure m = o.measure(t);
  if (m.continuous.empty()) return total;
  auto g = [&](double r) { return in.density(r, s); };
  const auto [peak, arg] = sampled_peak(g);
  RealKernel k;
  k.f = g;
  k.v = 0;
  k.sc = 1.0 / arg;
  k.sup = 2.0 * peak;
  QuadTol tol;
  tol.abs = 1e-14;
  tol.rel = 1e-11;
  return total + integrate_measure(k, m.continuous, tol);
}

double SubordinatorFamily::density_dt(double t, double s) const {
  switch (kind_) {
    case Kind::Gamma: return density(t, s) * (std::log(s) - boost::math::digamma(t));
    case Kind::StableHalf: return density(t, s) * (1.0 / t - t / (2.0 * s));
    default: throw UnsupportedError("no closed-form time derivative for " + name());
  }
}

std::vector<Atom> SubordinatorFamily::atoms(double t) const {
  require_time(t);
  if (t == 0.0) return {{0.0, 1.0}};
  switch (kind_) {
    case Kind::Gamma:
    case Kind::StableHalf: return {};
    case Kind::Poisson: return poisson_atoms(c_, t);
    case Kind::Identity: return {{t, 1.0}};
    case Kind::Composed: break;
  }
  const auto& o = outer();
  const auto& in = inner();
  if (o.kind_ == Kind::Identity) return in.atoms(t);
  if (in.kind_ == Kind::Identity) return o.atoms(t);
  std::vector<Atom> out;
  for (const auto& a : o.atoms(t))
    for (const auto& b : in.atoms(a.location)) out.push_back({b.location, a.mass * b.mass});
  const TimeMeasure m = o.measure(t);
  if (m.continuous.empty()) return merge(out);
  if (in.kind_ != Kind::Poisson) {
    if (!in.atoms(1.0).empty()) throw UnsupportedError("atoms of this composition are not supported");
    return merge(out);
  }
  const double c = in.c_;
  double cum = 0.0;
  for (const auto& a : out) cum += a.mass;
  for (int j = 0; j < 400; ++j) {
    RealKernel k;
    k.f = [c, j](double r) { return std::exp(-c * r + j * std::log(c * r) - std::lgamma(j + 1.0)); };
    k.v = 0;
    k.sc = c / std::max(1.0, double(j));
    k.sup = 1.0;
    const double p = integrate_measure(k, m.continuous);
    if (p > 0.0) out.push_back({double(j), p});
    cum += p;
    if (1.0 - cum < 1e-15) break;
  }
  return merge(out);
}

TimeMeasure SubordinatorFamily::measure(double t) const {
  require_time(t);
  TimeMeasure m;
  m.atoms = atoms(t);
  if (t == 0.0) return m;
  switch (kind_) {
    case Kind::Gamma: {
      DensitySegment seg;
      seg.lower = 0.0;
      seg.upper = inf;
      seg.density = [t](double s) { return std::exp((t - 1.0) * std::log(s) - s - std::lgamma(t)); };
      seg.endpoint_exponent = t - 1.0;
      seg.tail = TailDescriptor{1.0, {std::exp(-std::lgamma(t)), t - 1.0, 1.0}, true};
      m.continuous = RadonMeasure({}, {seg});
      break;
    }
    case Kind::StableHalf: {
      // below t^2/1000 the density is under e^{-250} relative to its peak
      DensitySegment seg;
      seg.lower = 1e-3 * t * t;
      seg.upper = inf;
      seg.density = [t](double s) { return t * inv_two_sqrt_pi * std::pow(s, -1.5) * std::exp(-t * t / (4.0 * s)); };
      seg.tail = TailDescriptor{t * t, {t * inv_two_sqrt_pi, -1.5, 0.0}, false};
      m.continuous = RadonMeasure({}, {seg});
      break;
    }
    case Kind::Poisson:
    case Kind::Identity: break;
    case Kind::Composed: throw UnsupportedError("composed families are integrated through their outer measure");
  }
  return m;
}

Complex SubordinatorFamily::laplace(double t, Complex z) const {
  require_time(t);
  if (z.real() < 0.0) throw DomainError("Laplace transform needs Re z >= 0");
  QuadTol tol;
  tol.abs = 1e-14;
  tol.rel = 1e-12;
  if (kind_ != Kind::Composed) return integrate_time_measure(LaplaceKernel{z}, measure(t), tol);
  const auto& o = outer();
  const auto& in = inner();
  if (o.kind_ == Kind::Identity) return in.laplace(t, z);
  const Complex phz = in.psi()(z);
  FnKernel<Complex> k;
  k.f = [&](double s) { return in.laplace(s, z); };
  k.z0 = 0.0;
  k.sc = std::max(1e-3, std::abs(phz));
  const double re = phz.real();
  k.bnd = [re](double s) { return std::exp(-re * s); };
  return integrate_time_measure(k, o.measure(t), tol);
}

double SubordinatorFamily::mass(double t) const { return laplace(t, 0.0).real(); }

Matrix subordinate_matrix(const SubordinatorFamily& f, const SectorialMatrix& A, double t, const QuadTol& tol) {
  require_time(t);
  for (Index i = 0; i < A.eigenvalues().size(); ++i)
    if (A.eigenvalues()(i).real() < -1e-12 * std::max(1.0, A.norm()))
      throw SemigroupError("subordinate_matrix: spectrum leaves the closed right half-plane");
  const double M = semigroup_bound(A);
  if (M > 1e8) throw SemigroupError("subordinate_matrix: semigroup is not bounded at matrix scale");
  const Index n = A.dim();
  FnKernel<Matrix> k;
  k.z0 = Matrix::Zero(n, n);
  if (f.kind() == SubordinatorFamily::Kind::Composed && f.outer().kind() != SubordinatorFamily::Kind::Identity) {
    const auto& in = f.inner();
    k.f = [&](double s) { return subordinate_matrix(in, A, s, tol); };
    k.sc = std::max(1e-3, std::abs(in.psi()(A.norm())));
    k.bnd = [M](double) { return M; };
    return integrate_time_measure(k, f.outer().measure(t), tol);
  }
  if (f.kind() == SubordinatorFamily::Kind::Composed) return subordinate_matrix(f.inner(), A, t, tol);
  k.f = [&](double s) { return A.semigroup().semigroup(s); };
  k.sc = std::max(A.norm(), 1e-300);
  k.bnd = [&, M](double s) { return M * spectral_norm(A.semigroup().semigroup(s)); };
  return integrate_time_measure(k, f.measure(t), tol);
}

CheckReport semigroup_property_check(const SubordinatorFamily& f, double t, double s, const std::vector<Complex>& zs) {
  CheckReport rep;
  rep.id = "SEMIGROUP";
  rep.tolerance = 1e-8;
  rep.worst_margin = 0.0;
  for (Complex z : zs) {
    const double r = std::abs(f.laplace(t, z) * f.laplace(s, z) - f.laplace(t + s, z));
    if (rep.samples++ == 0 || -r < rep.worst_margin) {
      rep.worst_margin = -r;
      rep.worst_z = z;
    }
  }
  rep.constants["t"] = t;
  rep.constants["s"] = s;
  rep.finalize();
  return rep;
}

CheckReport laplace_consistency_check(const SubordinatorFamily& f, const std::vector<double>& ts,
                                      const std::vector<Complex>& zs) {
  CheckReport rep;
  rep.id = "LAPLACE";
  rep.tolerance = 1e-7;
  rep.worst_margin = 0.0;
  double worst_t = 0.0;
  for (double t : ts)
    for (Complex z : zs) {
      const double r = std::abs(f.laplace(t, z) - f.laplace_exact(t, z));
      ++rep.samples;
      if (-r < rep.worst_margin) {
        rep.worst_margin = -r;
        rep.worst_z = z;
        worst_t = t;
      }
    }
  rep.constants["worst_t"] = worst_t;
  rep.finalize();
  return rep;
}

namespace {

// total variation of d/dt mu_t; the derivative integrates to zero, so it is twice the mass of its negative part
double derivative_norm(const SubordinatorFamily& f, double t) {
  QuadTol tol;
  tol.abs = 1e-14;
  tol.rel = 1e-11;
  tol.max_panels = 4000;
  switch (f.kind()) {
    case SubordinatorFamily::Kind::Gamma: {
      // s = u^{1/t} on [0, s*] with log s* = digamma(t)
      const double dg = boost::math::digamma(t);
      const double ustar = std::exp(t * dg);
      const double lg = std::lgamma(t);
      auto g = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double s = std::pow(u, 1.0 / t);
        return std::exp(-s - lg) / t * (std::log(u) / t - dg);
      };
      auto r = gauss_kronrod(g, 0.0, ustar, tol, 8);
      if (!r.converged) throw QuadratureError("gamma derivative norm did not converge", r.error);
      return 2.0 * std::abs(r.value);
    }
    case SubordinatorFamily::Kind::StableHalf: {
      // s = t^2 v on [0, 1/2]
      auto g = [](double v) {
        if (v <= 0.0) return 0.0;
        return inv_two_sqrt_pi * std::pow(v, -1.5) * std::exp(-0.25 / v) * (1.0 - 0.5 / v);
      };
      auto r = gauss_kronrod(g, 0.0, 0.5, tol, 8);
      if (!r.converged) throw QuadratureError("stable derivative norm did not converge", r.error);
      return 2.0 * std::abs(r.value) / t;
    }
    case SubordinatorFamily::Kind::Poisson: {
      double sum = 0.0;
      for (const auto& a : f.atoms(t)) sum += a.mass * std::abs(a.location / t - f.c());
      return sum;
    }
    default: throw UnsupportedError("time derivative norm is not available for " + f.name());
  }
}

}  // namespace

T1Table t1_diagnostic(const SubordinatorFamily& f, int levels) {
  if (levels < 3) throw DomainError("t1_diagnostic needs at least 3 levels");
  T1Table out;
  for (int k = 0; k <= levels; ++k) {
    const double t = std::ldexp(1.0, -k);
    const double n = derivative_norm(f, t);
    out.rows.push_back({t, n, t * n});
    out.max_product = std::max(out.max_product, t * n);
  }
  // growth exponent of t ||mu_t'|| over the last two halvings
  const auto& a = out.rows[out.rows.size() - 3];
  const auto& b = out.rows.back();
  const double p = std::log(b.product / a.product) / std::log(a.t / b.t);
  out.bounded = std::isfinite(out.max_product) && (b.product == 0.0 || p < 0.05);
  out.degenerate = f.kind() == SubordinatorFamily::Kind::Poisson;
  out.note = out.degenerate ? "psi is bounded: a bounded product says nothing about holomorphy"
                            : "bounded product is evidence of the T1 property, not a proof";
  return out;
}

std::vector<DensityRow> compose_subordinator(const SubordinatorFamily& outer, const SubordinatorFamily& inner, double t,
                                             const std::vector<double>& taus) {
  const auto f = SubordinatorFamily::composed(outer, inner);
  std::vector<DensityRow> out;
  for (double tau : taus) out.push_back({tau, f.density(t, tau)});
  return out;
}

double holomorphy_probe(const BernsteinFn& psi, const SectorialMatrix& A, double half_angle, int radii, int angles) {
  if (!(half_angle >= 0.0 && half_angle < pi / 2)) throw DomainError("probe half-angle must lie in [0, pi/2)");
  const Matrix P = levy_apply(psi, A);
  double sup = 0.0;
  for (int i = 0; i < radii; ++i) {
    const double rho = std::pow(10.0, -3.0 + 6.0 * i / (radii - 1)) / std::max(1e-300, A.center());
    for (int j = 0; j < angles; ++j) {
      const double phi = angles == 1 ? 0.0 : -half_angle + 2.0 * half_angle * j / (angles - 1);
      sup = std::max(sup, spectral_norm(expm(-std::polar(rho, phi) * P)));
    }
  }
  return sup;
}

}  // namespace bfcalc
