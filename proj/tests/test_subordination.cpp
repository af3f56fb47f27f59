#include <doctest.h>

#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

#include "bfcalc/subordination.hpp"

using namespace bfcalc;

namespace {

using SF = SubordinatorFamily;

Matrix diag(std::initializer_list<Complex> d) {
  Matrix m = Matrix::Zero(Index(d.size()), Index(d.size()));
  Index i = 0;
  for (Complex v : d) {
    m(i, i) = v;
    ++i;
  }
  return m;
}

double rel(const Matrix& a, const Matrix& b) { return spectral_norm(a - b) / spectral_norm(b); }

const std::vector<Complex> zgrid = {0.0, 0.3, 1.0, 4.0, {1.0, 2.0}, {0.2, -3.0}, {10.0, 5.0}};

}  // namespace

TEST_CASE("subordinator densities") {
  CHECK(SF::gamma().density(1.0, 2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
  // direct quadrature of the stable-1/2 density against e^{-r}
  const auto st = SF::stable_half();
  double acc = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    // r = x^2 / (1 - x)^2 maps (0, 1) to (0, inf)
    const double x = (i + 0.5) / n;
    const double r = x * x / ((1 - x) * (1 - x));
    const double dr = 2.0 * x / std::pow(1 - x, 3);
    acc += std::exp(-r) * st.density(1.0, r) * dr / n;
  }
  CHECK(acc == doctest::Approx(std::exp(-1.0)).epsilon(1e-7));
  CHECK(st.laplace(1.0, 1.0).real() == doctest::Approx(0.36787944117144233).epsilon(1e-10));
  auto at = SF::poisson(1.0).atoms(1.0);
  REQUIRE(!at.empty());
  CHECK(at[0].location == 0.0);
  CHECK(at[0].mass == doctest::Approx(std::exp(-1.0)));
  CHECK_THROWS_AS(SF::gamma().density(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(SF::gamma().density(-1.0, 1.0), DomainError);
  CHECK_THROWS_AS(SF::poisson(1.0).density(1.0, 1.0), UnsupportedError);
  CHECK_THROWS_AS(SF::poisson(0.0), SpecError);
  // d/dt against central differences
  for (double t : {0.3, 1.0, 2.5})
    for (double s : {0.1, 1.0, 3.0}) {
      const double h = 1e-6;
      for (const auto& f : {SF::gamma(), SF::stable_half()}) {
        const double fd = (f.density(t + h, s) - f.density(t - h, s)) / (2 * h);
        CHECK(f.density_dt(t, s) == doctest::Approx(fd).epsilon(1e-6));
      }
    }
}

TEST_CASE("mass and Laplace consistency") {
  const std::vector<double> ts = {0.05, 0.5, 1.0, 3.0};
  for (const auto& f : {SF::gamma(), SF::stable_half(), SF::poisson(1.0), SF::poisson(2.5), SF::identity()}) {
    CAPTURE(f.name());
    for (double t : ts) CHECK(f.mass(t) == doctest::Approx(1.0).epsilon(1e-9));
    auto rep = laplace_consistency_check(f, ts, zgrid);
    CHECK(rep.pass);
    CHECK(rep.worst_margin >= -1e-7);
  }
  // Gamma closed form (1 + z)^{-t}
  CHECK(std::abs(SF::gamma().laplace(0.5, {1.0, 2.0}) - std::pow(Complex(2.0, 2.0), -0.5)) < 1e-10);
}

TEST_CASE("convolution semigroup property") {
  CHECK(semigroup_property_check(SF::gamma(), 1.0, 1.0, {1.0}).worst_margin > -1e-12);
  auto st = semigroup_property_check(SF::stable_half(), 1.0, 2.0, {1.0});
  CHECK(st.pass);
  CHECK(st.worst_margin >= -1e-8);
  auto po = semigroup_property_check(SF::poisson(1.0), 0.5, 0.5, {Complex(0.0, 1.0)});
  CHECK(po.worst_margin >= -1e-12);
  CHECK(semigroup_property_check(SF::gamma(), 0.3, 0.9, zgrid).pass);
}

TEST_CASE("subordinated matrices") {
  auto A = make_sectorial(diag({1.0, 2.0}));
  const Matrix G = subordinate_matrix(SF::gamma(), A, 2.0);
  CHECK(rel(G, diag({0.25, 1.0 / 9})) < 1e-8);
  auto B = make_sectorial(diag({1.0, 4.0}));
  CHECK(rel(subordinate_matrix(SF::stable_half(), B, 1.0), diag({std::exp(-1.0), std::exp(-2.0)})) < 1e-7);
  CHECK(rel(subordinate_matrix(SF::poisson(1.0), A, 0.0), Matrix(Matrix::Identity(2, 2))) < 1e-15);
  for (double t : {0.25, 0.5, 1.5}) {
    CAPTURE(t);
    const Matrix o = eigen_oracle([t](Complex l) { return std::pow(1.0 + l, -t); }, A.A());
    CHECK(rel(subordinate_matrix(SF::gamma(), A, t), o) < 1e-8);
  }
  // non-normal: against expm of the Levy calculus
  Matrix J(2, 2);
  J << 1.0, 2.0, 0.0, Complex(2.0, 0.5);
  auto S = make_sectorial(J);
  for (const auto& f : {SF::gamma(), SF::stable_half(), SF::poisson(1.5)}) {
    CAPTURE(f.name());
    const Matrix e = expm(-0.7 * levy_apply(f.psi(), S));
    CHECK(rel(subordinate_matrix(f, S, 0.7), e) < 1e-6);
  }
}

TEST_CASE("T1 diagnostic") {
  auto g = t1_diagnostic(SF::gamma(), 10);
  CHECK(g.bounded);
  CHECK(!g.degenerate);
  // oracle: d/dt of the regularized incomplete gamma at the sign change, by central differences
  for (const auto& row : g.rows) {
    const double t = row.t;
    const double x = std::exp(boost::math::digamma(t));
    if (x < 1e-200) continue;
    const double h = 1e-5 * t;
    const double d = (boost::math::gamma_p(t + h, x) - boost::math::gamma_p(t - h, x)) / (2 * h);
    CHECK(row.norm == doctest::Approx(2.0 * std::abs(d)).epsilon(1e-6));
  }
  auto s = t1_diagnostic(SF::stable_half(), 10);
  CHECK(s.bounded);
  for (const auto& row : s.rows) CHECK(row.product == doctest::Approx(2.0 * std::sqrt(2.0 / (pi * std::exp(1.0)))).epsilon(1e-9));
  auto p = t1_diagnostic(SF::poisson(1.0), 12);
  CHECK(p.bounded);
  CHECK(p.degenerate);
  CHECK(p.rows.back().product == doctest::Approx(2.0 * p.rows.back().t).epsilon(1e-3));
  CHECK_THROWS_AS(t1_diagnostic(SF::composed(SF::gamma(), SF::stable_half())), UnsupportedError);
}

TEST_CASE("composed subordinators") {
  const auto gs = SF::composed(SF::gamma(), SF::stable_half());
  CHECK(gs.laplace(1.0, 1.0).real() == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(std::abs(gs.laplace(1.0, {2.0, 1.0}) - gs.laplace_exact(1.0, {2.0, 1.0})) < 1e-7);
  // density of eta_1 integrates back to the Laplace transform
  auto rows = compose_subordinator(SF::gamma(), SF::stable_half(), 1.0, {0.1, 1.0, 10.0});
  for (const auto& r : rows) CHECK(r.value > 0.0);
  // eta_1(tau) = int s/(2 sqrt pi) tau^{-3/2} e^{-s^2/(4 tau)} e^{-s} ds, midpoint oracle
  for (const auto& r : rows) {
    double acc = 0.0;
    const int n = 400000;
    const double top = 60.0 + 20.0 * std::sqrt(r.tau);
    for (int i = 0; i < n; ++i) {
      const double s = (i + 0.5) * top / n;
      acc += s * 0.28209479177387814 * std::pow(r.tau, -1.5) * std::exp(-s * s / (4 * r.tau) - s) * top / n;
    }
    CHECK(r.value == doctest::Approx(acc).epsilon(1e-7));
  }
  auto id = compose_subordinator(SF::gamma(), SF::identity(), 0.7, {0.5, 2.0});
  for (const auto& r : id) CHECK(r.value == doctest::Approx(SF::gamma().density(0.7, r.tau)).epsilon(1e-14));
  const auto pg = SF::composed(SF::poisson(1.0), SF::gamma());
  CHECK(pg.laplace(1.0, 1.0).real() == doctest::Approx(std::exp(-0.5)).epsilon(1e-10));
  CHECK(pg.mass(1.0) == doctest::Approx(1.0).epsilon(1e-10));
  auto at = pg.atoms(1.0);
  REQUIRE(at.size() == 1);
  CHECK(at[0].mass == doctest::Approx(std::exp(-1.0)));
  // Gamma outer, Poisson inner: atoms only
  const auto gp = SF::composed(SF::gamma(), SF::poisson(1.0));
  double total = 0.0;
  for (const auto& a : gp.atoms(1.0)) total += a.mass;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  // P(N = 0) = int e^{-s} e^{-s} ds = 1/2
  CHECK(gp.atoms(1.0)[0].mass == doctest::Approx(0.5).epsilon(1e-10));
  // matrix level, normal A
  auto A = make_sectorial(diag({1.0, 3.0}));
  const Matrix o = eigen_oracle([](Complex l) { return 1.0 / (1.0 + std::sqrt(l)); }, A.A());
  CHECK(rel(subordinate_matrix(gs, A, 1.0), o) < 1e-6);
}

TEST_CASE("holomorphy probe") {
  auto A = make_sectorial(diag({std::polar(1.0, pi / 6), std::polar(1.0, -pi / 6), 3.0}));
  const double theta = pi / 2 - pi / 6;
  for (const auto& psi : {BernsteinFn::power(0.5), BernsteinFn::log1p(), BernsteinFn::one_minus_exp()}) {
    const double sup = holomorphy_probe(psi, A, theta - 0.05);
    CHECK(std::isfinite(sup));
    CHECK(sup < 10.0);
  }
}
