#include "bfcalc/bernstein.hpp"

#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

namespace bfcalc {

QuadTol default_tolerance() {
  QuadTol t;
  t.abs = 1e-13;
  t.rel = 1e-11;
  return t;
}

namespace {

void require_half_plane(Complex z, const char* what) {
  if (z.real() < 0.0 || !std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw DomainError(std::string(what) + ": argument must lie in the closed right half-plane");
}

Complex clamp_to_half_plane(Complex w) {
  if (w.real() < 0.0 && w.real() > -1e-14 * std::abs(w)) return {0.0, w.imag()};
  return w;
}

}  // namespace

BernsteinFn BernsteinFn::affine(double a, double b) {
  if (!(a >= 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b))
    throw SpecError("affine: a and b must be finite and nonnegative");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Affine;
  n->a = a;
  n->b = b;
  return BernsteinFn(n);
}

BernsteinFn BernsteinFn::power(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw SpecError("alpha out of (0,1]");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Power;
  n->alpha = alpha;
  return BernsteinFn(n);
}

BernsteinFn BernsteinFn::log1p() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Log1p;
  return BernsteinFn(n);
}

BernsteinFn BernsteinFn::one_minus_exp(double c, double r) {
  if (!(c > 0.0) || !(r > 0.0) || !std::isfinite(c) || !std::isfinite(r))
    throw SpecError("one_minus_exp: c and r must be positive");
  auto n = std::make_shared<Node>();
  n->kind = Kind::OneMinusExp;
  n->c = c;
  n->r = r;
  return BernsteinFn(n);
}

BernsteinFn BernsteinFn::levy(LevyTriple t) {
  if (!(t.a >= 0.0) || !(t.b >= 0.0) || !std::isfinite(t.a) || !std::isfinite(t.b))
    throw SpecError("levy: a and b must be finite and nonnegative");
  t.mu.validate();
  levy_admissibility(t.mu);
  auto n = std::make_shared<Node>();
  n->kind = Kind::Levy;
  n->a = t.a;
  n->b = t.b;
  n->mu = std::move(t.mu);
  return BernsteinFn(n);
}

BernsteinFn BernsteinFn::sum(std::vector<BernsteinFn> terms) {
  if (terms.empty()) throw SpecError("sum: needs at least one term");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Sum;
  n->children = std::move(terms);
  return BernsteinFn(n);
}

BernsteinFn BernsteinFn::compose(BernsteinFn outer, BernsteinFn inner) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Compose;
  n->children = {std::move(outer), std::move(inner)};
  return BernsteinFn(n);
}

Complex BernsteinFn::operator()(Complex z) const {
  require_half_plane(z, "eval_bernstein");
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Affine: return n.a + n.b * z;
    case Kind::Power: return z == Complex(0.0) ? Complex(0.0) : std::pow(z, n.alpha);
    case Kind::Log1p: return clog1p(z);
    case Kind::OneMinusExp: return -n.c * cexpm1(-n.r * z);
    case Kind::Levy: return n.a + n.b * z + integrate_measure(LevyKernel{z}, n.mu, default_tolerance());
    case Kind::Sum: {
      Complex s = 0.0;
      for (const auto& c : n.children) s += c(z);
      return s;
    }
    case Kind::Compose: return n.children[0](clamp_to_half_plane(n.children[1](z)));
  }
  return 0.0;
}

Complex BernsteinFn::derivative(Complex z, int k) const {
  if (k < 1 || k > 3) throw UnsupportedError("derivative order must be 1, 2 or 3");
  if (!(z.real() > 0.0)) throw DomainError("eval_derivative: Re z must be positive");
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Affine: return k == 1 ? Complex(n.b) : Complex(0.0);
    case Kind::Power: {
      double c = 1.0;
      for (int i = 0; i < k; ++i) c *= n.alpha - i;
      return c * std::pow(z, n.alpha - k);
    }
    case Kind::Log1p: {
      const double f = k == 3 ? 2.0 : 1.0;
      return (k % 2 == 1 ? f : -f) / std::pow(1.0 + z, k);
    }
    case Kind::OneMinusExp: {
      const double sign = k % 2 == 1 ? 1.0 : -1.0;
      return sign * n.c * std::pow(n.r, k) * std::exp(-n.r * z);
    }
    case Kind::Levy: {
      Complex v = integrate_measure(LevyDerivativeKernel{z, k}, n.mu, default_tolerance());
      if (k == 1) v += n.b;
      return v;
    }
    case Kind::Sum: {
      Complex s = 0.0;
      for (const auto& c : n.children) s += c.derivative(z, k);
      return s;
    }
    case Kind::Compose: {
      const BernsteinFn& f = n.children[0];
      const BernsteinFn& g = n.children[1];
      const Complex w = g(z);
      const Complex g1 = g.derivative(z, 1);
      if (k == 1) return f.derivative(w, 1) * g1;
      const Complex g2 = g.derivative(z, 2);
      if (k == 2) return f.derivative(w, 2) * g1 * g1 + f.derivative(w, 1) * g2;
      const Complex g3 = g.derivative(z, 3);
      return f.derivative(w, 3) * g1 * g1 * g1 + 3.0 * f.derivative(w, 2) * g1 * g2 + f.derivative(w, 1) * g3;
    }
  }
  return 0.0;
}

bool BernsteinFn::has_extension() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Levy: return n.mu.compactly_supported();
    case Kind::Sum:
    case Kind::Compose:
      for (const auto& c : n.children)
        if (!c.has_extension()) return false;
      return true;
    default: return true;
  }
}

Complex BernsteinFn::extended(Complex z) const {
  if (z.real() >= 0.0) return (*this)(z);
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Affine: return n.a + n.b * z;
    case Kind::Power:
      if (z.imag() == 0.0) throw DomainError("power: argument on the branch cut");
      return std::pow(z, n.alpha);
    case Kind::Log1p:
      if (z.imag() == 0.0 && z.real() <= -1.0) throw DomainError("log1p: argument on the branch cut");
      return clog1p(z);
    case Kind::OneMinusExp: return -n.c * cexpm1(-n.r * z);
    case Kind::Levy:
      if (!n.mu.compactly_supported())
        throw UnsupportedError("no continuation for a Levy measure with unbounded support");
      return n.a + n.b * z + integrate_measure(LevyKernel{z}, n.mu, default_tolerance());
    case Kind::Sum: {
      Complex s = 0.0;
      for (const auto& c : n.children) s += c.extended(z);
      return s;
    }
    case Kind::Compose: return n.children[0].extended(n.children[1].extended(z));
  }
  return 0.0;
}

std::optional<LevyTriple> BernsteinFn::triple() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Affine: return LevyTriple{n.a, n.b, {}};
    case Kind::Power:
      if (n.alpha == 1.0) return LevyTriple{0.0, 1.0, {}};
      return LevyTriple{0.0, 0.0,
                        RadonMeasure::from_term(
                            0.0, inf, {n.alpha / boost::math::tgamma(1.0 - n.alpha), -1.0 - n.alpha, 0.0})};
    case Kind::Log1p: return LevyTriple{0.0, 0.0, RadonMeasure::from_term(0.0, inf, {1.0, -1.0, 1.0})};
    case Kind::OneMinusExp: return LevyTriple{0.0, 0.0, RadonMeasure::dirac(n.r, n.c)};
    case Kind::Levy: return LevyTriple{n.a, n.b, n.mu};
    case Kind::Sum: {
      LevyTriple t;
      for (const auto& c : n.children) {
        auto ct = c.triple();
        if (!ct) return std::nullopt;
        t.a += ct->a;
        t.b += ct->b;
        t.mu = t.mu + ct->mu;
      }
      return t;
    }
    case Kind::Compose: return std::nullopt;
  }
  return std::nullopt;
}

BernsteinFn BernsteinFn::as_levy() const {
  auto t = triple();
  if (!t) throw UnsupportedError("composition has no known Levy triple");
  return levy(*t);
}

std::optional<StieltjesCBF> BernsteinFn::stieltjes() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Affine: return StieltjesCBF(n.a, n.b, {});
    case Kind::Power:
      if (n.alpha == 1.0) return StieltjesCBF(0.0, 1.0, {});
      return StieltjesCBF(0.0, 0.0,
                          RadonMeasure::from_term(0.0, inf, {std::sin(pi * n.alpha) / pi, n.alpha - 1.0, 0.0}));
    case Kind::Log1p: return StieltjesCBF(0.0, 0.0, RadonMeasure::from_term(1.0, inf, {1.0, -1.0, 0.0}));
    case Kind::Sum: {
      double a = 0.0, b = 0.0;
      RadonMeasure m;
      for (const auto& c : n.children) {
        auto s = c.stieltjes();
        if (!s) return std::nullopt;
        a += s->a();
        b += s->b();
        m = m + s->sigma();
      }
      return StieltjesCBF(a, b, m);
    }
    default: return std::nullopt;
  }
}

std::string BernsteinFn::describe() const {
  const Node& n = *node_;
  std::ostringstream os;
  os.precision(6);
  switch (n.kind) {
    case Kind::Affine: os << "affine(" << n.a << "," << n.b << ")"; break;
    case Kind::Power: os << "power(" << n.alpha << ")"; break;
    case Kind::Log1p: os << "log1p"; break;
    case Kind::OneMinusExp: os << "one_minus_exp(" << n.c << "," << n.r << ")"; break;
    case Kind::Levy:
      os << "levy(a=" << n.a << ",b=" << n.b << ",atoms=" << n.mu.atoms().size()
         << ",segments=" << n.mu.segments().size() << ")";
      break;
    case Kind::Sum:
      os << "sum(";
      for (std::size_t i = 0; i < n.children.size(); ++i) os << (i ? "," : "") << n.children[i].describe();
      os << ")";
      break;
    case Kind::Compose: os << n.children[0].describe() << "o" << n.children[1].describe(); break;
  }
  return os.str();
}

StieltjesCBF::StieltjesCBF(double a, double b, RadonMeasure sigma) : a_(a), b_(b), sigma_(std::move(sigma)) {
  if (!(a >= 0.0) || !(b >= 0.0)) throw SpecError("stieltjes: a and b must be nonnegative");
  sigma_.validate();
  stieltjes_admissibility(sigma_);
}

Complex StieltjesCBF::operator()(Complex lambda) const {
  if (lambda.imag() == 0.0 && lambda.real() <= 0.0) {
    if (lambda.real() == 0.0) return a_;
    throw DomainError("stieltjes: argument on the branch cut");
  }
  return a_ + b_ * lambda + integrate_measure(StieltjesKernel{lambda}, sigma_, default_tolerance());
}

PotentialFn::PotentialFn(BernsteinFn psi) : psi_(std::move(psi)) {
  if (psi_(Complex(1.0)) == Complex(0.0)) throw SpecError("potential: psi must be nonzero");
}

namespace {

void collect(const BernsteinFn& f, double& a, double& b, std::vector<AssociatedCbf::PowerPart>& powers,
             std::vector<AssociatedCbf::AtomsPart>& atoms, std::vector<RadonMeasure>& measures) {
  using Kind = BernsteinFn::Kind;
  const auto& n = f.node();
  switch (n.kind) {
    case Kind::Affine:
      a += n.a;
      b += n.b;
      break;
    case Kind::Power:
      if (n.alpha == 1.0)
        b += 1.0;
      else
        powers.push_back({n.alpha});
      break;
    case Kind::Log1p: measures.push_back(f.triple()->mu); break;
    case Kind::OneMinusExp: atoms.push_back({n.c, n.r}); break;
    case Kind::Levy:
      a += n.a;
      b += n.b;
      if (!n.mu.empty()) measures.push_back(n.mu);
      break;
    case Kind::Sum:
      for (const auto& c : n.children) collect(c, a, b, powers, atoms, measures);
      break;
    case Kind::Compose: throw UnsupportedError("composition has no known Levy triple; no associated function");
  }
}

}  // namespace

AssociatedCbf::AssociatedCbf(const BernsteinFn& psi) {
  collect(psi, a_, b_, powers_, atoms_, measures_);
  if (b_ > 0.0 || !powers_.empty()) {
    at_infinity_ = inf;
  } else {
    double v = a_;
    for (const auto& p : atoms_) v += p.c;
    try {
      for (const auto& m : measures_) v += total_mass(m);
    } catch (const Error&) {
      v = inf;
    }
    at_infinity_ = v;
  }
}

Complex AssociatedCbf::operator()(Complex lambda) const {
  if (lambda == Complex(0.0)) return a_;
  if (lambda.imag() == 0.0 && lambda.real() < 0.0) throw DomainError("associated cbf: argument on the branch cut");
  Complex v = a_ + b_ * lambda;
  for (const auto& p : powers_) v += boost::math::tgamma(1.0 + p.alpha) * std::pow(lambda, p.alpha);
  for (const auto& p : atoms_) v += p.c * p.r * lambda / (1.0 + p.r * lambda);
  const QuadTol tol = default_tolerance();
  for (const auto& m : measures_) v += integrate_measure(ARepKernel{lambda, 0}, m, tol);
  return v;
}

Complex AssociatedCbf::derivative(Complex lambda, int d) const {
  if (d < 1 || d > 2) throw UnsupportedError("associated cbf derivative order must be 1 or 2");
  if (lambda.imag() == 0.0 && lambda.real() <= 0.0) throw DomainError("associated cbf: argument on the branch cut");
  Complex v = d == 1 ? Complex(b_) : Complex(0.0);
  for (const auto& p : powers_) {
    const double g = boost::math::tgamma(1.0 + p.alpha);
    v += d == 1 ? g * p.alpha * std::pow(lambda, p.alpha - 1.0)
                : g * p.alpha * (p.alpha - 1.0) * std::pow(lambda, p.alpha - 2.0);
  }
  for (const auto& p : atoms_) {
    const Complex den = 1.0 + p.r * lambda;
    v += d == 1 ? p.c * p.r / (den * den) : -2.0 * p.c * p.r * p.r / (den * den * den);
  }
  const QuadTol tol = default_tolerance();
  for (const auto& m : measures_) v += integrate_measure(ARepKernel{lambda, d}, m, tol);
  return v;
}

Complex AssociatedCbf::psi_minus_phi(Complex lambda) const {
  require_half_plane(lambda, "psi_minus_phi");
  Complex v = 0.0;
  for (const auto& p : powers_)
    v += (1.0 - boost::math::tgamma(1.0 + p.alpha)) * std::pow(lambda, p.alpha);
  for (const auto& p : atoms_) v += p.c * delta(p.r * lambda);
  const QuadTol tol = default_tolerance();
  for (const auto& m : measures_) v += integrate_measure(DeltaKernel{lambda}, m, tol);
  return v;
}

StieltjesCBF AssociatedCbf::stieltjes() const {
  RadonMeasure sigma;
  for (const auto& p : powers_) {
    const double c = boost::math::tgamma(1.0 + p.alpha) * std::sin(pi * p.alpha) / pi;
    sigma = sigma + RadonMeasure::from_term(0.0, inf, {c, p.alpha - 1.0, 0.0});
  }
  for (const auto& p : atoms_) sigma = sigma + RadonMeasure::dirac(1.0 / p.r, p.c);
  for (const auto& m : measures_) sigma = sigma + m.reciprocal();
  return StieltjesCBF(a_, b_, sigma);
}

AssociatedCbf associated_cbf(const BernsteinFn& psi) { return AssociatedCbf(psi); }

Complex resolvent_diff_scalar(const BernsteinFn& psi, const AssociatedCbf& phi, Complex lambda, Complex z) {
  const Complex d = phi.psi_minus_phi(lambda);
  const Complex p = psi(lambda);
  const Complex f = p - d;
  const Complex den = (z + p) * (z + f);
  if (den == Complex(0.0)) throw DomainError("resolvent_diff_scalar: z + psi(lambda) vanishes");
  return -d / den;
}

Complex resolvent_diff_scalar(const BernsteinFn& psi, Complex lambda, Complex z) {
  return resolvent_diff_scalar(psi, associated_cbf(psi), lambda, z);
}

}  // namespace bfcalc
