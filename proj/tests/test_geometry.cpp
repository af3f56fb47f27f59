#include <doctest.h>

#include <cmath>

#include "bfcalc/geometry.hpp"

using namespace bfcalc;

namespace {

SamplingPlan small_plan() {
  SamplingPlan p;
  p.radii = 24;
  p.angles = 17;
  return p;
}

BernsteinFn mixed() {
  LevyTriple t;
  t.a = 0.3;
  t.b = 0.2;
  t.mu = RadonMeasure::dirac(0.05, 0.4) + RadonMeasure::dirac(7.0, 0.8) +
         RadonMeasure::from_term(0.0, inf, {0.5, -1.4, 0.3});
  return BernsteinFn::levy(t);
}

}  // namespace

TEST_CASE("sector membership") {
  Sector s(pi / 4);
  CHECK(s.contains({1.0, 0.5}));
  CHECK(!s.contains({1.0, 1.5}));
  CHECK(!s.contains(0.0));
  Sector u(pi / 2, 2.0, true);
  CHECK(u.contains({0.5, 0.5}));
  CHECK(!u.contains({0.5, -0.5}));
  CHECK(!u.contains({3.0, 0.1}));
  CHECK_THROWS_AS(Sector(0.0), DomainError);
  CHECK_THROWS_AS(Sector(1.0, -1.0), DomainError);
}

TEST_CASE("FEH equality for the identity at a boundary point") {
  const Complex z = std::polar(1.0, pi / 4);
  const double lhs = std::abs(z + 1.0);
  CHECK(lhs == doctest::Approx(2.0 * std::cos(pi / 8)).epsilon(1e-12));
  CHECK(std::cos(pi / 8) * 2.0 == doctest::Approx(lhs).epsilon(1e-12));
  auto rep = check_inequality("FEH", BernsteinFn::affine(0.0, 1.0), small_plan());
  CHECK(rep.pass);
}

TEST_CASE("RE for one minus exp") {
  auto psi = BernsteinFn::one_minus_exp();
  const double re = psi({1.0, 1.0}).real();
  CHECK(re == doctest::Approx(1.0 - std::exp(-1.0) * std::cos(1.0)).epsilon(1e-14));
  CHECK(re - psi(1.0).real() > 0.0);
  auto rep = check_inequality("RE", psi, small_plan());
  CHECK(rep.pass);
  CHECK(rep.worst_margin > -1e-12);
}

TEST_CASE("SECT for the square root") {
  SamplingPlan p;
  p.radii = 32;
  p.angles = 32;
  auto rep = check_inequality("SECT", BernsteinFn::power(0.5), p);
  CHECK(rep.pass);
  CHECK(rep.samples >= 1000);
}

TEST_CASE("all inequality ids pass on representative functions") {
  std::vector<BernsteinFn> fns = {BernsteinFn::power(0.3), BernsteinFn::log1p(), BernsteinFn::one_minus_exp(2.0, 0.5),
                                  mixed(), BernsteinFn::affine(0.5, 1.0)};
  for (const auto& psi : fns) {
    for (const auto& id : inequality_ids()) {
      auto rep = check_inequality(id, psi, small_plan());
      CHECK_MESSAGE(rep.pass, psi.describe() << " " << id << " margin " << rep.worst_margin);
    }
  }
}

TEST_CASE("a function that is not Bernstein fails") {
  // z^2 is not Bernstein but can be pushed through the checks as an affine-like evaluator
  auto psi = BernsteinFn::compose(BernsteinFn::power(1.0), BernsteinFn::affine(0.0, 1.0));
  CHECK(check_inequality("SECT", psi, small_plan()).pass);
  CHECK_THROWS_AS(check_inequality("NOPE", psi), DomainError);
  CHECK_THROWS(check_inequality("AREP1", BernsteinFn::compose(BernsteinFn::log1p(), BernsteinFn::power(0.5))));
}

TEST_CASE("growth constant") {
  auto t = mixed().triple();
  REQUIRE(t);
  // oracle: a + b + int_0^1 s mu + 2 mu[1, inf)
  double first = 0.05 * 0.4;
  double tail = 0.8;
  // density 0.5 s^{-1.4} e^{-0.3 s}
  {
    double f = 0.0, m = 0.0;
    const int N = 200000;
    for (int i = 0; i < N; ++i) {
      const double u = (i + 0.5) / N;
      f += 0.5 * std::pow(u, -0.4) * std::exp(-0.3 * u) / N;
    }
    // tail mass via substitution s = 1/u
    for (int i = 0; i < N; ++i) {
      const double u = (i + 0.5) / N;
      const double s = 1.0 / u;
      m += 0.5 * std::pow(s, -1.4) * std::exp(-0.3 * s) / (u * u) / N;
    }
    first += f;
    tail += m;
  }
  CHECK(growth_constant(mixed()) == doctest::Approx(0.3 + 0.2 + first + 2.0 * tail).epsilon(2e-4));
}

TEST_CASE("shrink angles") {
  auto a = cbf_shrink_angles(pi / 4, pi / 2 + 1e-9);
  CHECK(a.theta0 == doctest::Approx(2.0 * pi / 3).epsilon(1e-14));
  CHECK(a.theta_tilde == doctest::Approx(pi / 4).epsilon(1e-8));
  auto b = cbf_shrink_angles(pi / 4, 2.0 * pi / 3);
  CHECK(b.theta_tilde == doctest::Approx(pi / 2).epsilon(1e-12));
  double prev = 0.0;
  for (int i = 1; i < 20; ++i) {
    const double th = pi / 2 + (a.theta0 - pi / 2) * i / 20.0;
    auto c = cbf_shrink_angles(pi / 4, th);
    CHECK(c.theta_tilde > prev);
    CHECK(c.theta_tilde < pi / 2);
    prev = c.theta_tilde;
  }
  CHECK_THROWS_AS(cbf_shrink_angles(pi / 4, 2.2), DomainError);
  CHECK_THROWS_AS(cbf_shrink_angles(pi / 4, 1.0), DomainError);
  CHECK_THROWS_AS(cbf_shrink_angles(pi / 2, 2.0), DomainError);
}

TEST_CASE("sector shrink holds for fractional powers") {
  for (double alpha : {0.3, 0.6}) {
    const double gamma = alpha * pi / 2;
    const double th0 = cbf_shrink_angles(gamma, 1.6).theta0;
    const double theta = 0.5 * (pi / 2 + th0);
    auto rep = check_cbf_sector_shrink(BernsteinFn::power(alpha), gamma, theta, small_plan());
    CHECK(rep.upper_half.pass);
    CHECK(rep.full_sector.pass);
  }
}

TEST_CASE("contour bound") {
  const double omega = 3 * pi / 4, beta = pi / 8;
  auto id = contour_bound_check(BernsteinFn::affine(0.0, 1.0), 1.0, omega, beta);
  CHECK(id.integral == doctest::Approx(0.0));
  CHECK(id.pass);

  auto psi = BernsteinFn::one_minus_exp();
  auto r1 = contour_bound_check(psi, 1.0, omega, beta);
  const double c = std::cos(beta), K = std::cos((omega + beta) / 2);
  CHECK(r1.bound == doctest::Approx(8.0 / (c * c * K * K)).epsilon(1e-14));
  CHECK(r1.bound == doctest::Approx(246.257).epsilon(1e-5));
  CHECK(r1.pass);
  CHECK(r1.integral > 0.0);
  CHECK(r1.integral < r1.bound);

  // oracle: plain trapezoid in u on a wide window
  const AssociatedCbf phi(psi);
  double s = 0.0;
  const double h = 0.01;
  for (double u = -40.0; u <= 40.0; u += h) {
    s += h * (std::abs(resolvent_diff_scalar(psi, phi, std::polar(std::exp(u), beta), 1.0)) +
              std::abs(resolvent_diff_scalar(psi, phi, std::polar(std::exp(u), -beta), 1.0)));
  }
  CHECK(r1.integral == doctest::Approx(s).epsilon(1e-5));

  auto r100 = contour_bound_check(psi, 100.0, omega, beta);
  CHECK(r100.pass);
  CHECK(r100.bound * 100.0 == doctest::Approx(r1.bound));
  CHECK(r100.integral < r100.bound);

  CHECK_THROWS_AS(contour_bound_check(psi, 1.0, pi / 3, beta), DomainError);
  CHECK_THROWS_AS(contour_bound_check(psi, 1.0, omega, pi / 2), DomainError);
  CHECK_THROWS_AS(contour_bound_check(psi, Complex(-1.0, 0.1), omega, beta), DomainError);
}

TEST_CASE("contour bound on random draws") {
  std::vector<BernsteinFn> fns = {BernsteinFn::power(0.5), BernsteinFn::log1p(), mixed()};
  for (const auto& psi : fns) {
    for (double omega : {0.6 * pi, 0.8 * pi}) {
      for (double bf : {0.2, 0.8}) {
        const double beta = bf * (pi - omega);
        for (Complex z : {Complex(0.1, 0.0), std::polar(3.0, 0.9 * omega)}) {
          auto r = contour_bound_check(psi, z, omega, beta);
          CHECK_MESSAGE(r.pass, psi.describe() << " margin " << r.margin);
        }
      }
    }
  }
}

TEST_CASE("improving angles") {
  CHECK(improving_angles(AngleMode::BHH, pi / 2, 3 * pi / 4) == doctest::Approx(pi / 6).epsilon(1e-14));
  CHECK(improving_angles(AngleMode::CK, 0, 0, 3 * pi / 4) == doctest::Approx(pi / 6).epsilon(1e-14));
  CHECK(improving_angles(AngleMode::BHHT, 2.0, 2.0, pi / 2) == doctest::Approx(pi / 2).epsilon(1e-14));
  const double bhh = improving_angles(AngleMode::BHH, 1.0, 2.5);
  CHECK(improving_angles(AngleMode::BHHT, 1.0, 2.5, 1e-10) == doctest::Approx(bhh).epsilon(1e-9));
  CHECK(improving_angles(AngleMode::BHH0, 1.0, 2.5, pi / 2) == doctest::Approx(bhh).epsilon(1e-14));
  CHECK_THROWS_AS(improving_angles(AngleMode::BHH, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(improving_angles(AngleMode::BHH, 2.8, 2.5), DomainError);
  CHECK_THROWS_AS(improving_angles(AngleMode::CK, 0, 0, 1.0), DomainError);
  CHECK_THROWS_AS(improving_angles(AngleMode::BHHT, 1.0, 2.5, 2.0), DomainError);
  CHECK_THROWS_AS(improving_angles(AngleMode::BHH0, 1.0, 2.5, 5.0), DomainError);
}

TEST_CASE("Carasso-Kato criteria") {
  auto p = small_plan();
  auto lg = carasso_kato_check(BernsteinFn::log1p(), CkMode::Run, 0.2, 10.0, 0, 0, p);
  CHECK(lg.pass);
  CHECK(lg.constants["max_arg"] <= 0.2);
  for (double g : {0.5, 1.0, 1.5}) CHECK(!carasso_kato_check(BernsteinFn::affine(0.0, 1.0), CkMode::Run, g, 0.0, 0, 0, p).pass);
  CHECK(carasso_kato_check(BernsteinFn::power(0.5), CkMode::Run, pi / 4, 0.0, 0, 0, p).pass);
  CHECK(!carasso_kato_check(BernsteinFn::power(0.5), CkMode::Run, pi / 5, 0.0, 0, 0, p).pass);

  CHECK(carasso_kato_check(BernsteinFn::power(0.5), CkMode::CKr, 0, 0, 3 * pi / 4, 1.0, p).pass);
  CHECK(!carasso_kato_check(BernsteinFn::power(0.9), CkMode::CKr, 0, 0, 3 * pi / 4, 1.0, p).pass);
  CHECK(carasso_kato_check(BernsteinFn::log1p(), CkMode::CKr, 0, 0, 0.9 * pi, 10.0, p).pass);
}

TEST_CASE("Fujita ratio probe") {
  auto rows = fujita_ratio_probe(BernsteinFn::power(0.4), 0.4, {-1.0, 0.3, 2.0}, {1e-3, 1.0, 1e5});
  CHECK(rows.size() == 9);
  for (const auto& r : rows) CHECK(r.deviation < 1e-13);

  auto lg = fujita_ratio_probe(BernsteinFn::log1p(), 0.0, {pi / 4}, {1e6});
  // oracle: log(1 + r e^{i theta}) / log(1 + r)
  const Complex w = std::polar(1e6, pi / 4);
  const Complex ref = std::log(1.0 + w) / std::log(1.0 + 1e6);
  CHECK(std::abs(lg[0].ratio - ref) < 1e-14);
  CHECK(lg[0].deviation == doctest::Approx(std::abs(ref - 1.0)).epsilon(1e-12));

  auto s = BernsteinFn::sum({BernsteinFn::affine(0.0, 1.0), BernsteinFn::power(0.5)});
  auto r = fujita_ratio_probe(s, 1.0, {pi / 4}, {1e6});
  CHECK(r[0].deviation < 1e-2);
  const Complex ref2 = (w + std::sqrt(w)) / (1e6 + 1e3);
  CHECK(std::abs(r[0].ratio - ref2) < 1e-13);
}
