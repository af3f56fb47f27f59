#include <cmath>
#include <random>

#include <boost/math/special_functions/gamma.hpp>

#include "bfcalc/bernstein.hpp"
#include "doctest.h"

using namespace bfcalc;

namespace {

double rel_err(Complex a, Complex b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

// psi(z) = a + b z + sum w_i (1 - e^{-s_i z}) + C int_l^inf (1-e^{-zs}) e^{-rs} ds, by hand
struct HandTriple {
  double a, b;
  std::vector<Atom> atoms;
  double C, l, r;
  Complex operator()(Complex z) const {
    Complex v = a + b * z;
    for (const auto& at : atoms) v += at.mass * (1.0 - std::exp(-z * at.location));
    v += C * (std::exp(-r * l) / r - std::exp(-(r + z) * l) / (r + z));
    return v;
  }
  BernsteinFn make() const {
    RadonMeasure m(atoms, {});
    m = m + RadonMeasure::from_term(l, inf, {C, 0.0, r});
    return BernsteinFn::levy({a, b, m});
  }
};

}  // namespace

TEST_CASE("eval_bernstein examples") {
  CHECK(std::abs(BernsteinFn::power(0.37)(1.0) - 1.0) < 1e-15);
  const double ref = 1.0 - std::exp(-1.0);
  CHECK(std::abs(BernsteinFn::one_minus_exp()(1.0) - ref) < 1e-15);
  auto atom = BernsteinFn::levy({0.0, 0.0, RadonMeasure::dirac(1.0)});
  CHECK(std::abs(atom(1.0) - ref) < 1e-12);
  CHECK_THROWS_AS(BernsteinFn::power(0.5)(Complex(-1.0, 0.0)), DomainError);
  CHECK_THROWS_AS(BernsteinFn::power(1.5), SpecError);
}

TEST_CASE("non-admissible Levy measures are rejected") {
  // s^{-2} near 0 is not integrable against min(1, s)
  CHECK_THROWS_AS(BernsteinFn::levy({0.0, 0.0, RadonMeasure::from_term(0.0, 1.0, {1.0, -2.0, 0.0})}),
                  AdmissibilityError);
  // s^{-0.5} at infinity has infinite mass
  CHECK_THROWS_AS(BernsteinFn::levy({0.0, 0.0, RadonMeasure::from_term(1.0, inf, {1.0, -0.5, 0.0})}),
                  AdmissibilityError);
}

TEST_CASE("eval_derivative examples") {
  CHECK(std::abs(BernsteinFn::affine(0.0, 1.0).derivative(5.0, 1) - 1.0) < 1e-15);
  CHECK(std::abs(BernsteinFn::one_minus_exp().derivative(1.0, 2) + std::exp(-1.0)) < 1e-15);
  CHECK(std::abs(BernsteinFn::power(0.5).derivative(4.0, 1) - 0.25) < 1e-15);
  CHECK_THROWS_AS(BernsteinFn::power(0.5).derivative(4.0, 4), UnsupportedError);
}

TEST_CASE("triple-based evaluation matches closed forms") {
  std::vector<BernsteinFn> fns = {BernsteinFn::power(0.25), BernsteinFn::power(0.5), BernsteinFn::power(0.75),
                                  BernsteinFn::log1p(), BernsteinFn::one_minus_exp(2.0, 0.5)};
  double worst = 0.0;
  for (const auto& f : fns) {
    const BernsteinFn g = f.as_levy();
    for (int i = 0; i <= 12; ++i) {
      const double rad = std::pow(10.0, -3.0 + 0.5 * i);
      for (int j = 0; j <= 8; ++j) {
        const double th = -pi / 2 + pi * j / 8;
        const Complex z = std::polar(rad, th);
        worst = std::max(worst, rel_err(g(z), f(z)));
      }
    }
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("triple-based derivatives match closed forms") {
  for (const auto& f : {BernsteinFn::power(0.5), BernsteinFn::log1p()}) {
    const BernsteinFn g = f.as_levy();
    for (Complex z : {Complex(0.01, 0.0), Complex(1.0, 3.0), Complex(50.0, -20.0)})
      for (int k = 1; k <= 3; ++k) CHECK(rel_err(g.derivative(z, k), f.derivative(z, k)) < 1e-9);
  }
}

TEST_CASE("exponential segments: closed form against hand formula") {
  HandTriple h{0.3, 0.2, {{0.5, 0.7}, {20.0, 0.1}}, 0.8, 0.25, 1.7};
  const BernsteinFn f = h.make();
  for (Complex z : {Complex(1e-6, 0.0), Complex(0.0, 1.0), Complex(3.0, -4.0), Complex(1e4, 1e3)})
    CHECK(rel_err(f(z), h(z)) < 1e-12);
}

TEST_CASE("derivatives against central differences") {
  HandTriple h{0.1, 0.4, {{0.3, 0.5}}, 1.1, 0.0, 2.0};
  const BernsteinFn f = h.make();
  const auto fns = {f, BernsteinFn::power(0.3), BernsteinFn::log1p(),
                    BernsteinFn::compose(BernsteinFn::log1p(), BernsteinFn::power(0.5))};
  for (const auto& g : fns) {
    for (Complex z : {Complex(0.5, 0.2), Complex(2.0, -1.0), Complex(7.0, 0.0)}) {
      const double hstep = 1e-5 * std::abs(z);
      auto fd = [&](int k) -> Complex {
        if (k == 1) return (g(z + hstep) - g(z - hstep)) / (2.0 * hstep);
        return (g.derivative(z + hstep, k - 1) - g.derivative(z - hstep, k - 1)) / (2.0 * hstep);
      };
      for (int k = 1; k <= 3; ++k) CHECK(rel_err(g.derivative(z, k), fd(k)) < 1e-5);
    }
  }
}

TEST_CASE("monotone nonnegativity and Jacobson-type inequalities on random triples") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Atom> atoms;
    for (int i = 0; i < 3; ++i) atoms.push_back({std::pow(10.0, -2.0 + 4.0 * U(rng)), 0.01 + U(rng)});
    RadonMeasure m(atoms, {});
    m = m + RadonMeasure::from_term(0.0, inf, {U(rng), 0.0, 0.1 + 3.0 * U(rng)});
    const BernsteinFn f = BernsteinFn::levy({U(rng), U(rng), m});
    double prev = -1.0;
    for (int i = 0; i < 40; ++i) {
      const double t = std::pow(10.0, -4.0 + 0.2 * i);
      const double v = f(t).real();
      CHECK(std::abs(f(t).imag()) < 1e-14 * (1.0 + v));
      CHECK(v >= prev - 1e-14 * (1.0 + v));
      prev = v;
      for (double s : {1.0, 1.5, 10.0}) {
        const double vs = f(s * t).real();
        CHECK(v <= vs + 1e-12 * (1.0 + vs));
        CHECK(vs <= s * v + 1e-12 * (1.0 + vs));
      }
      double kf = 1.0;
      for (int k = 1; k <= 3; ++k) {
        kf *= k;
        CHECK(std::pow(t, k) * std::abs(f.derivative(t, k).real()) <= kf * v * (1.0 + 1e-10) + 1e-14);
      }
    }
  }
}

TEST_CASE("associated cbf examples") {
  auto phi_id = associated_cbf(BernsteinFn::affine(0.0, 1.0));
  CHECK(std::abs(phi_id(Complex(2.0, 3.0)) - Complex(2.0, 3.0)) < 1e-15);
  auto phi_ome = associated_cbf(BernsteinFn::levy({0.0, 0.0, RadonMeasure::dirac(1.0)}));
  for (Complex l : {Complex(1.0), Complex(0.5, 2.0)}) CHECK(std::abs(phi_ome(l) - l / (1.0 + l)) < 1e-15);
  auto phi_const = associated_cbf(BernsteinFn::affine(0.7, 0.0));
  CHECK(std::abs(phi_const(Complex(3.0, -1.0)) - 0.7) < 1e-15);
  CHECK_THROWS_AS(associated_cbf(BernsteinFn::compose(BernsteinFn::log1p(), BernsteinFn::power(0.5))),
                  UnsupportedError);
}

TEST_CASE("associated cbf equals the scaled Laplace transform of psi") {
  HandTriple h{0.2, 0.3, {{0.4, 0.6}, {3.0, 0.2}}, 0.9, 0.5, 1.0};
  RadonMeasure m(h.atoms, {});
  m = m + RadonMeasure::from_term(0.5, 4.0, {0.9, 0.0, 1.0});
  const BernsteinFn f = BernsteinFn::levy({h.a, h.b, m});
  const AssociatedCbf phi(f);
  for (double lam : {0.1, 1.0, 7.0}) {
    // lambda^{-1} int_0^inf e^{-t/lambda} psi(t) dt, in t = lambda * x
    auto r = gauss_kronrod([&](double x) { return std::exp(-x) * f(lam * x).real(); }, 0.0, 80.0,
                           QuadTol{1e-13, 1e-13, 4000}, 16);
    CHECK(std::abs(phi(lam) - r.value) < 1e-7);
  }
}

TEST_CASE("associated cbf: closed-form parts match the measure path") {
  for (const auto& f : {BernsteinFn::power(0.5), BernsteinFn::one_minus_exp(1.5, 0.7)}) {
    const AssociatedCbf a(f), b(f.as_levy());
    for (Complex l : {Complex(0.01), Complex(1.0, 1.0), Complex(300.0, -40.0)}) {
      CHECK(rel_err(a(l), b(l)) < 1e-9);
      CHECK(rel_err(a.derivative(l, 1), b.derivative(l, 1)) < 1e-9);
      CHECK(rel_err(a.derivative(l, 2), b.derivative(l, 2)) < 1e-9);
      CHECK(std::abs(a.psi_minus_phi(l) - b.psi_minus_phi(l)) < 1e-9 * std::abs(f(l)));
    }
  }
}

TEST_CASE("associated cbf: psi - phi is consistent and the Stieltjes form agrees") {
  HandTriple h{0.1, 0.0, {{2.0, 0.3}}, 0.5, 0.0, 0.8};
  const BernsteinFn f = h.make();
  const AssociatedCbf phi(f);
  const StieltjesCBF st = phi.stieltjes();
  for (Complex l : {Complex(0.02), Complex(1.0, 0.5), Complex(40.0, 30.0)}) {
    CHECK(std::abs(phi.psi_minus_phi(l) - (f(l) - phi(l))) < 1e-10);
    CHECK(rel_err(st(l), phi(l)) < 1e-9);
  }
  const BernsteinFn lg = BernsteinFn::log1p();
  const AssociatedCbf phil(lg);
  for (double l : {0.3, 2.0}) {
    // phi = e^{1/l} E_1(1/l) for log(1+z)
    CHECK(rel_err(phil(l), expint_scaled(1, 1.0 / l)) < 1e-10);
  }
  CHECK(rel_err(phil.stieltjes()(Complex(2.0, 1.0)), phil(Complex(2.0, 1.0))) < 1e-8);
}

TEST_CASE("stieltjes representations of closed-form cbfs") {
  for (const auto& f : {BernsteinFn::power(0.5), BernsteinFn::power(0.2), BernsteinFn::log1p()}) {
    const StieltjesCBF s = *f.stieltjes();
    for (Complex l : {Complex(0.3), Complex(2.0, 5.0), Complex(1e3, -1.0)}) CHECK(rel_err(s(l), f(l)) < 1e-9);
    // upper half-plane is mapped into itself, including beyond the right half-plane
    for (double th : {0.2, 1.5, 2.5, 3.0}) CHECK(s(std::polar(2.0, th)).imag() >= 0.0);
  }
  CHECK_FALSE(BernsteinFn::one_minus_exp().stieltjes().has_value());
}

TEST_CASE("delta examples") {
  for (double l : {1e-2, 1e-4, 1e-6}) CHECK(delta(l).real() / (l * l) == doctest::Approx(0.5).epsilon(2 * l));
  CHECK(delta(1.0).real() == doctest::Approx(0.5 - std::exp(-1.0)).epsilon(1e-14));
  CHECK(std::abs(delta(1.0)) <= delta_bound(1.0));
  const Complex di = delta(Complex(0.0, 1.0));
  CHECK(std::abs(di - (1.0 / Complex(1.0, 1.0) - std::exp(Complex(0.0, -1.0)))) < 1e-15);
  CHECK(std::abs(di) <= delta_bound(Complex(0.0, 1.0)));
  for (int i = 0; i < 50; ++i) {
    const Complex w = std::polar(std::pow(10.0, -3.0 + 0.12 * i), -pi / 2 + pi * ((i * 7) % 50) / 49.0);
    CHECK(std::abs(delta(w)) <= delta_bound(w) * (1.0 + 1e-12));
  }
}

TEST_CASE("resolvent_diff_scalar examples") {
  const BernsteinFn id = BernsteinFn::affine(0.0, 1.0);
  CHECK(std::abs(resolvent_diff_scalar(id, Complex(1.0, 0.3), Complex(-0.5, 2.0))) < 1e-16);
  const BernsteinFn f = BernsteinFn::one_minus_exp();
  const double psi1 = 1.0 - std::exp(-1.0);
  const double oracle = 1.0 / (1.0 + psi1) - 1.0 / 1.5;
  CHECK(resolvent_diff_scalar(f, 1.0, 1.0).real() == doctest::Approx(oracle).epsilon(1e-13));
  CHECK(oracle == doctest::Approx(-0.0539668).epsilon(1e-6));
  // pointwise estimate K^2 |r| <= (4t/cos b) phi'(t cos b) / (|z| + phi(t cos b))^2 at lambda = t e^{ib}
  const double om = 3 * pi / 4, b = pi / 8;
  const double K = std::cos((om + b) / 2);
  const AssociatedCbf phi(f);
  const Complex z = std::polar(10.0, 0.7 * om);
  for (double t : {0.1, 1.0, 10.0}) {
    const Complex lam = std::polar(t, b);
    const double c = std::cos(b);
    const double rhs = 4.0 * t / c * phi.derivative(t * c, 1).real() / std::pow(10.0 + phi(t * c).real(), 2);
    CHECK(K * K * std::abs(resolvent_diff_scalar(f, lam, z)) <= rhs);
  }
}

TEST_CASE("associated cbf: psi - phi for singular power densities near the imaginary axis") {
  for (double q : {-1.7, -1.0, -0.4}) {
    LevyTriple t;
    t.mu = RadonMeasure::from_term(0.0, inf, {0.6, q, 0.3});
    const BernsteinFn f = BernsteinFn::levy(t);
    const AssociatedCbf phi(f);
    for (Complex l : {std::polar(1e-4, 1.5), std::polar(2.0, -1.55), std::polar(3e5, 1.5692), Complex(7.0, 0.0)}) {
      const Complex direct = f(l) - phi(l);
      CHECK_MESSAGE(std::abs(phi.psi_minus_phi(l) - direct) < 1e-9 * std::max(1.0, std::abs(f(l))),
                    "q=" << q << " lambda=" << l);
    }
  }
}
