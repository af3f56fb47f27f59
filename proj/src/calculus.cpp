#include "bfcalc/calculus.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace bfcalc {

QuadTol matrix_tolerance() {
  QuadTol t;
  t.abs = 1e-12;
  t.rel = 1e-11;
  t.max_panels = 4000;
  return t;
}

namespace {

Matrix eye(Index n) { return Matrix::Identity(n, n); }

Matrix schur_apply(const Matrix& A, const std::function<Complex(Complex)>& f) {
  Eigen::ComplexSchur<Matrix> cs(A);
  const Matrix& T = cs.matrixT();
  const Matrix& Q = cs.matrixU();
  Vector d(T.rows());
  for (Index i = 0; i < T.rows(); ++i) d(i) = f(T(i, i));
  return Q * d.asDiagonal() * Q.adjoint();
}

// I - e^{-sA}
struct MatrixLevyKernel {
  using value_type = Matrix;
  const SectorialMatrix* S;
  double sup_semigroup;
  double tail_tol;

  Index n() const { return S->dim(); }
  Matrix zero() const { return Matrix::Zero(n(), n()); }
  Matrix E(double s) const { return S->semigroup().semigroup(s); }
  Matrix operator()(double s) const { return eye(n()) - E(s); }
  Matrix reduced(double s) const {
    if (s * S->norm() < 0.5) return S->A() * phi1(-s * S->A());
    return (eye(n()) - E(s)) / s;
  }
  int order_at_zero() const { return 1; }
  double scale() const { return std::max(S->norm(), 1e-300); }
  double bound(double) const { return 1.0 + sup_semigroup; }
  double power_tail_start() const { return 0.0; }
  // C int_L^inf (I - e^{-sA}) s^q ds
  Matrix power_tail(double L, double C, double q) const {
    Matrix out = eye(n()) * (C * std::pow(L, q + 1.0) / (-q - 1.0));
    if (S->normal()) return out - C * schur_apply(S->A(), [&](Complex l) { return laplace_power_tail(l, L, q); });
    Matrix acc = zero();
    double x = std::log(L);
    QuadTol tol = matrix_tolerance();
    for (int k = 0; k < 400; ++k) {
      const double Sx = std::exp(x);
      const double rem = spectral_norm(E(Sx)) * std::pow(Sx, q + 1.0) / (-q - 1.0);
      if (rem <= tail_tol) return out - C * acc;
      auto g = [&](double u) -> Matrix {
        const double s = std::exp(u);
        return E(s) * std::pow(s, q + 1.0);
      };
      auto r = gauss_kronrod(g, x, x + 1.0, tol, 1);
      if (!r.converged) throw QuadratureError("semigroup tail did not converge", r.error);
      acc += r.value;
      x += 1.0;
    }
    throw QuadratureError("semigroup tail did not decay", magnitude(acc));
  }
  std::optional<Matrix> exp_segment(double l, double u, const DensityTerm& t) const {
    const double r = t.decay;
    if (t.power != 0.0 || !(r > 0.0) || S->norm() * (l + 1.0 / r) < 0.05) return std::nullopt;
    const double mass = (std::exp(-r * l) - (std::isfinite(u) ? std::exp(-r * u) : 0.0)) / r;
    Matrix B = S->A();
    B.diagonal().array() += r;
    Matrix diff = std::exp(-r * l) * E(l);
    if (std::isfinite(u)) diff -= std::exp(-r * u) * E(u);
    return Matrix(t.coef * (mass * eye(n()) - B.partialPivLu().solve(diff)));
  }
};

// e^{-sA} (1 - e^{-eps s})
struct MatrixShiftKernel {
  using value_type = Matrix;
  const SectorialMatrix* S;
  double eps;
  double sup_semigroup;

  Matrix zero() const { return Matrix::Zero(S->dim(), S->dim()); }
  Matrix E(double s) const { return S->semigroup().semigroup(s); }
  Matrix operator()(double s) const { return E(s) * -std::expm1(-eps * s); }
  Matrix reduced(double s) const { return E(s) * (-std::expm1(-eps * s) / s); }
  int order_at_zero() const { return 1; }
  double scale() const { return std::max(S->norm(), eps); }
  double bound(double) const { return sup_semigroup; }
  std::optional<Matrix> exp_segment(double l, double u, const DensityTerm& t) const {
    if (t.power != 0.0 || !(t.decay > 0.0)) return std::nullopt;
    auto piece = [&](double r) {
      Matrix B = S->A();
      B.diagonal().array() += r;
      Matrix diff = std::exp(-r * l) * E(l);
      if (std::isfinite(u)) diff -= std::exp(-r * u) * E(u);
      return Matrix(B.partialPivLu().solve(diff));
    };
    return Matrix(t.coef * (piece(t.decay) - piece(t.decay + eps)));
  }
};

// A (s + A)^{-1}
struct MatrixStieltjesKernel {
  using value_type = Matrix;
  const SectorialMatrix* S;

  Matrix zero() const { return Matrix::Zero(S->dim(), S->dim()); }
  Matrix operator()(double s) const { return S->A() * resolvent(S->A(), s); }
  Matrix reduced(double s) const { return (*this)(s); }
  int order_at_zero() const { return 0; }
  double scale() const { return 1.0 / S->min_modulus(); }
  double bound(double s) const { return S->norm() * S->M_hat() / s; }
  double tail_decay() const { return 1.0; }
  double power_tail_start() const { return 4.0 * S->norm(); }
  // C int_L^inf A (s + A)^{-1} s^q ds by the Neumann series
  Matrix power_tail(double L, double C, double q) const {
    if (!(q < 0.0)) throw AdmissibilityError("power density is not Stieltjes-admissible");
    Matrix P = S->A() / L;
    Matrix sum = zero();
    for (int k = 0; k < 200; ++k) {
      Matrix term = P * ((k % 2 ? -1.0 : 1.0) / (k - q));
      sum += term;
      if (magnitude(term) <= 1e-17 * magnitude(sum)) break;
      P = P * S->A() / L;
    }
    return C * std::pow(L, q) * L * sum;
  }
};

void require_semigroup(const SectorialMatrix& A, const char* what) {
  for (Index i = 0; i < A.eigenvalues().size(); ++i)
    if (A.eigenvalues()(i).real() < -1e-12 * std::max(1.0, A.norm()))
      throw SemigroupError(std::string(what) + ": spectrum leaves the closed right half-plane");
}

}  // namespace

double semigroup_bound(const SectorialMatrix& A) {
  double m = 1.0;
  const double c = A.center();
  for (int k = -48; k <= 48; ++k) {
    const double t = std::pow(10.0, k / 8.0) / c;
    m = std::max(m, spectral_norm(A.semigroup().semigroup(t)));
  }
  return m;
}

Matrix hirsch_apply(const StieltjesCBF& phi, const SectorialMatrix& A, const QuadTol& tol) {
  Matrix out = phi.a() * eye(A.dim()) + phi.b() * A.A();
  if (!phi.sigma().empty()) out += integrate_measure(MatrixStieltjesKernel{&A}, phi.sigma(), tol);
  return out;
}

Matrix levy_apply(const BernsteinFn& psi, const SectorialMatrix& A, const QuadTol& tol) {
  auto t = psi.triple();
  if (!t) throw UnsupportedError("levy_apply needs a Levy triple");
  Matrix out = t->a * eye(A.dim()) + t->b * A.A();
  if (t->mu.empty()) return out;
  require_semigroup(A, "levy_apply");
  const double M = semigroup_bound(A);
  if (M > 1e8) throw SemigroupError("levy_apply: semigroup is not bounded at matrix scale");
  out += integrate_measure(MatrixLevyKernel{&A, M, 0.1 * tol.abs}, t->mu, tol);
  return out;
}

Matrix associated_apply(const AssociatedCbf& phi, const SectorialMatrix& A, const QuadTol& tol) {
  return hirsch_apply(phi.stieltjes(), A, tol);
}

Matrix shift_apply(const BernsteinFn& psi, const SectorialMatrix& A, double eps, const QuadTol& tol) {
  if (!(eps >= 0.0)) throw DomainError("shift must be nonnegative");
  auto t = psi.triple();
  if (!t) throw UnsupportedError("shift_apply needs a Levy triple");
  Matrix out = (t->b * eps) * eye(A.dim());
  if (t->mu.empty() || eps == 0.0) return out;
  require_semigroup(A, "shift_apply");
  out += integrate_measure(MatrixShiftKernel{&A, eps, semigroup_bound(A)}, t->mu, tol);
  return out;
}

Matrix contour_apply(const std::function<Complex(Complex)>& f, const SectorialMatrix& A, SectorContour& c,
                     double analyticity, double tol) {
  const double beta = c.beta;
  if (!(beta > 0.0 && beta < pi)) throw DomainError("contour half-angle must lie in (0, pi)");
  if (beta - A.omega_hat() < 1e-3) throw ContourError("contour is too close to the spectrum");
  if (analyticity - beta < 1e-3) throw ContourError("contour leaves the analyticity sector of f");
  const Complex ep = std::polar(1.0, beta), em = std::polar(1.0, -beta);
  const Complex coef = 1.0 / Complex(0.0, 2.0 * pi);
  int evals = 0;
  auto g = [&](double u) -> Matrix {
    const double t = std::exp(u);
    const Complex lp = t * ep, lm = t * em;
    ++evals;
    // l (l - A)^{-1} = I + A (l - A)^{-1}; the identity part integrates to zero since f vanishes at 0 and infinity
    Matrix out = f(lp) * resolvent(A.A(), -lp) - f(lm) * resolvent(A.A(), -lm);
    return coef * (A.A() * out);
  };
  const double u0 = std::log(A.center());
  double scale = magnitude(g(u0));
  auto scan = [&](double dir) {
    double u = u0;
    int quiet = 0;
    double last = 0.0;
    for (int k = 0; k < 80; ++k) {
      u += dir;
      last = magnitude(g(u));
      scale = std::max(scale, last);
      quiet = last <= 1e-3 * tol * std::max(1.0, scale) ? quiet + 1 : 0;
      if (quiet >= 2) return std::pair{u, last};
    }
    throw ContourError("integrand does not decay along the contour");
  };
  auto [hi, thi] = scan(1.0);
  auto [lo, tlo] = scan(-1.0);
  c.u_min = lo;
  c.u_max = hi;
  c.truncation = thi + tlo;
  QuadTol qt;
  qt.abs = tol * std::max(1.0, scale);
  qt.rel = tol;
  qt.max_panels = 20000;
  auto r = gauss_kronrod(g, lo, hi, qt, int(hi - lo));
  if (!r.converged) throw QuadratureError("contour quadrature did not converge", r.error);
  c.evaluations = evals;
  return r.value;
}

double kato_bound(double M, double r, double gamma, Complex z) {
  const double pr = pi * r;
  return M * std::sin(pr) / pr * (pr + gamma) / std::sin(pr + gamma) / std::abs(z);
}

Matrix kato_fracpow_resolvent(const SectorialMatrix& A, double r, Complex z, double gamma) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("r must lie in (0, 1)");
  if (!(gamma > 0.0 && gamma < (1.0 - r) * pi)) throw DomainError("gamma must lie in (0, (1 - r) pi)");
  if (z == Complex(0.0) || std::abs(std::arg(z)) >= gamma) throw DomainError("z must lie in the sector of angle gamma");
  const double c = std::cos(pi * r);
  auto g = [&](double u) -> Matrix {
    const double t = std::exp(u), tr = std::pow(t, r);
    const Complex den = tr * tr + 2.0 * tr * z * c + z * z;
    return (t * tr / den) * resolvent(A.A(), t);
  };
  // integrand ~ t^{r+1} at 0 and t^{-r} at infinity
  const double u0 = std::log(std::max(A.center(), std::pow(std::abs(z), 1.0 / r)));
  const double lo = u0 - 40.0 / (r + 1.0) - 5.0, hi = u0 + 34.0 / r + 5.0;
  QuadTol tol;
  tol.abs = 1e-14;
  tol.rel = 1e-12;
  tol.max_panels = 20000;
  auto res = gauss_kronrod(g, lo, hi, tol, int(hi - lo));
  if (!res.converged) throw QuadratureError("Kato integral did not converge", res.error);
  // remaining tail: int_T^inf t^{-r-1} dt
  const double T = std::exp(hi);
  Matrix out = res.value + eye(A.dim()) * (std::pow(T, -r) / r);
  return std::sin(pi * r) / pi * out;
}

std::vector<ResidualReport> resolvent_identity_residuals(const BernsteinFn& psi, const SectorialMatrix& A,
                                                        const std::vector<Complex>& zs, double omega) {
  if (!(A.omega_hat() < pi / 2)) throw DomainError("resolvent identity needs a sector angle below pi/2");
  const AssociatedCbf phi(psi);
  const Matrix P = levy_apply(psi, A);
  const Matrix F = associated_apply(phi, A);
  std::vector<ResidualReport> out;
  for (Complex z : zs) {
    if (z == Complex(0.0)) throw DomainError("z must be nonzero");
    const double w = std::max(omega, std::abs(std::arg(z)));
    if (!(w < pi)) throw DomainError("z must lie off the negative axis");
    const Matrix R1 = resolvent(P, z), R2 = resolvent(F, z);
    SectorContour c{0.5 * (A.omega_hat() + std::min(pi / 2, pi - w))};
    const Matrix Rc = contour_apply([&](Complex l) { return resolvent_diff_scalar(psi, phi, l, z); }, A, c, pi / 2);
    out.push_back({spectral_norm(R1 - R2 - Rc), spectral_norm(R1), c.beta});
  }
  return out;
}

ResidualReport resolvent_identity_residual(const BernsteinFn& psi, const SectorialMatrix& A, Complex z, double omega) {
  return resolvent_identity_residuals(psi, A, {z}, omega).front();
}

MnConstant mn_constant(const SectorialMatrix& A, double alpha, double q, double gamma) {
  if (!(q > 1.0 && q * alpha < pi)) throw DomainError("q must satisfy 1 < q < pi/alpha");
  if (!(gamma > 0.0 && gamma < pi - q * alpha)) throw DomainError("gamma must lie in (0, pi - q alpha)");
  const double b = 0.5 * (alpha + (pi - gamma) / q);
  const double M = A.M_hat();
  const double Mb = A.sector_constant(pi - b).value;
  return {M + 2.0 * Mb / (pi * std::cos(b / 2) * std::cos(q * b / 2)), b, M, Mb};
}

namespace {

// A^q for q > 0 through the integer part and a Hirsch fractional power
Matrix matrix_power(const SectorialMatrix& A, double q) {
  const int k = int(std::floor(q));
  const double f = q - k;
  Matrix out = eye(A.dim());
  for (int i = 0; i < k; ++i) out = out * A.A();
  if (f > 0.0) out = out * hirsch_apply(*BernsteinFn::power(f).stieltjes(), A);
  return out;
}

CheckReport compare(const std::string& id, double lhs, double rhs, Complex worst, double tol) {
  CheckReport rep;
  rep.id = id;
  rep.samples = 1;
  rep.tolerance = tol;
  rep.worst_margin = (rhs - lhs) / std::max(std::abs(rhs), 1e-300);
  rep.worst_z = worst;
  rep.constants["lhs"] = lhs;
  rep.constants["rhs"] = rhs;
  rep.finalize();
  return rep;
}

// sup_t ||e^{-tX}|| on a log grid centred on the spectrum of X
double exp_sup(const Matrix& X) {
  Eigen::ComplexEigenSolver<Matrix> es(X, false);
  double lg = 0.0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) lg += std::log(std::max(std::abs(es.eigenvalues()(i)), 1e-300));
  const double c = std::exp(lg / double(X.rows()));
  double m = 1.0;
  for (int k = -48; k <= 48; ++k) m = std::max(m, spectral_norm(expm(-(std::pow(10.0, k / 8.0) / c) * X)));
  return m;
}

double default_q(double alpha, double lo, double cap) {
  const double top = alpha > 0.0 ? std::min(pi / alpha, cap) : cap;
  return 0.5 * (lo + top);
}

}  // namespace

const std::vector<std::string>& bound_suite_ids() {
  static const std::vector<std::string> ids = {"FRPOW1", "SUPG", "MES0", "AEST", "AESA", "ZZZ", "FPSI"};
  return ids;
}

CheckReport bound_suite(const BernsteinFn& psi, const SectorialMatrix& A, const std::string& id, const BoundParams& p) {
  const double slack = 1e-4;
  const double alpha = A.omega_hat();
  if (id == "FRPOW1") {
    auto st = psi.stieltjes();
    if (!st) throw UnsupportedError("FRPOW1 needs a complete Bernstein function");
    const Matrix fA = hirsch_apply(*st, A);
    const auto lhs = resolvent_sup(fA, 0.0, p.plan);
    return compare(id, lhs.value, A.M_hat(), lhs.worst_z, slack);
  }
  if (id == "SUPG") {
    const Matrix P = levy_apply(psi, A);
    const auto lhs = resolvent_sup(P, 0.0, p.plan);
    const double mid = exp_sup(P);
    const double rhs = semigroup_bound(A);
    auto rep = compare(id, lhs.value, mid, lhs.worst_z, slack);
    const double m2 = (rhs - mid) / rhs;
    rep.worst_margin = std::min(rep.worst_margin, m2);
    rep.constants["semigroup_sup_psi"] = mid;
    rep.constants["semigroup_sup_A"] = rhs;
    rep.finalize();
    return rep;
  }
  if (id == "MES0") {
    const double q = p.q > 0.0 ? p.q : default_q(alpha, 1.0, 3.0);
    if (!(q > 1.0 && q * alpha < pi)) throw DomainError("MES0: q must satisfy 1 < q < pi/alpha");
    const double gamma = p.gamma > 0.0 ? p.gamma : 0.5 * (pi - q * alpha);
    const MnConstant mn = mn_constant(A, alpha, q, gamma);
    const auto lhs = resolvent_sup(matrix_power(A, q), gamma, p.plan);
    auto rep = compare(id, lhs.value, mn.value, lhs.worst_z, slack);
    rep.constants["q"] = q;
    rep.constants["gamma"] = gamma;
    rep.constants["M"] = mn.M;
    rep.constants["M_beta"] = mn.M_beta;
    return rep;
  }
  if (id == "AEST" || id == "AESA") {
    const bool aesa = id == "AESA";
    const double theta = aesa ? (p.theta > 0.0 ? p.theta : pi / 2 - alpha) : 0.0;
    if (aesa && !(theta > 0.0 && theta <= pi / 2 - alpha + 1e-12))
      throw DomainError("AESA: theta must lie in (0, pi/2 - omega_A]");
    const double a = aesa ? pi / 2 - theta : alpha;
    const double lo = aesa ? 2.0 : 1.0;
    const double q = p.q > 0.0 ? p.q : default_q(a, lo, aesa ? 3.0 : 2.0);
    if (!(q > lo && q * a < pi)) throw DomainError(id + ": q out of range");
    const double gmax = (1.0 - 1.0 / q) * pi;
    const double gmin = aesa ? pi / 2 : 0.0;
    const double gamma = p.gamma > 0.0 ? p.gamma : 0.5 * (gmin + gmax);
    if (!(gamma > gmin && gamma < gmax)) throw DomainError(id + ": gamma out of range");
    const double gm = gamma < pi - q * a ? gamma : 0.5 * (pi - q * a);
    const MnConstant mn = mn_constant(A, a, q, gm);
    const double pq = pi / q;
    double rhs = mn.value * std::sin(pq) / pq * (pq + gamma) / std::sin(pq + gamma);
    Matrix P;
    if (aesa) {
      const double delta = pi / 2 + theta - gamma;
      const double Mw = A.sector_constant(pi / 2 + theta - delta / 2).value;
      const double s1 = std::sin(theta / 2), s2 = std::sin(delta / 4);
      rhs += 4.0 * Mw / (pi * s1 * s1 * s2 * s2);
      P = levy_apply(psi, A);
    } else {
      auto st = psi.stieltjes();
      if (!st) throw UnsupportedError("AEST needs a complete Bernstein function");
      P = hirsch_apply(*st, A);
    }
    const auto lhs = resolvent_sup(P, gamma, p.plan);
    auto rep = compare(id, lhs.value, rhs, lhs.worst_z, slack);
    rep.constants["q"] = q;
    rep.constants["gamma"] = gamma;
    rep.constants["M_tilde"] = mn.value;
    if (aesa) rep.constants["theta"] = theta;
    return rep;
  }
  if (id == "ZZZ") {
    const double r = p.r;
    if (!(r > 0.0 && r < 1.0)) throw DomainError("ZZZ: r must lie in (0, 1)");
    const double gamma = p.gamma > 0.0 ? p.gamma : 0.5 * (1.0 - r) * pi;
    if (!(gamma < (1.0 - r) * pi)) throw DomainError("ZZZ: gamma must lie in (0, (1 - r) pi)");
    const Matrix Ar = hirsch_apply(*BernsteinFn::power(r).stieltjes(), A);
    const auto lhs = resolvent_sup(Ar, gamma, p.plan);
    auto rep = compare(id, lhs.value, kato_bound(A.M_hat(), r, gamma, 1.0), lhs.worst_z, slack);
    rep.constants["r"] = r;
    rep.constants["gamma"] = gamma;
    return rep;
  }
  if (id == "FPSI") {
    if (!(alpha < pi / 2)) throw DomainError("FPSI needs a sector angle below pi/2");
    auto tau2 = [](Complex l) {
      const Complex t = l / ((1.0 + l) * (1.0 + l));
      return t * t;
    };
    SectorContour c{0.5 * (alpha + pi / 2)};
    const Matrix G = contour_apply([&](Complex l) { return tau2(l) / psi(l); }, A, c, pi / 2);
    Matrix IA = eye(A.dim()) + A.A();
    Matrix T = A.A().partialPivLu().solve(IA * IA);  // tau(A)^{-1}
    const Matrix fA = G * T * T;
    const Matrix inv = levy_apply(psi, A).inverse();
    CheckReport rep;
    rep.id = id;
    rep.samples = 1;
    rep.tolerance = 1e-6;
    rep.worst_margin = -spectral_norm(fA - inv) / std::max(1e-300, spectral_norm(inv));
    rep.constants["residual"] = -rep.worst_margin;
    rep.finalize();
    return rep;
  }
  throw DomainError("unknown bound suite id: " + id);
}

CheckReport shift_identity_check(const BernsteinFn& psi, const SectorialMatrix& A, double eps, double d, double t) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  if (!(d >= 0.0)) throw DomainError("d must be nonnegative");
  const Index n = A.dim();
  const Matrix P = levy_apply(psi, A);
  Matrix Ae = A.A();
  Ae.diagonal().array() += eps;
  const Matrix Pe = levy_apply(psi, make_sectorial(Ae));
  const Matrix B = shift_apply(psi, A, eps);
  const double res_a = spectral_norm(Pe - P - B) / std::max(1.0, spectral_norm(Pe));
  const double M = semigroup_bound(A);
  const double lhs_b = spectral_norm(Pe - P);
  const double rhs_b = M * (psi(eps).real() - psi(0.0).real());
  const double margin_b = (rhs_b - lhs_b) / std::max(1.0, rhs_b);
  Matrix Ad = A.A();
  Ad.diagonal().array() += d;
  const Matrix Pd = levy_apply(psi, make_sectorial(Ad));
  const Matrix Bd = shift_apply(psi, A, d);
  const Matrix lhs_c = expm(-t * P);
  const Matrix rhs_c = expm(-t * Pd) * expm(t * Bd);
  const double res_c = spectral_norm(lhs_c - rhs_c) / std::max(1.0, spectral_norm(lhs_c));
  CheckReport rep;
  rep.id = "SHIFT";
  rep.samples = 3;
  rep.tolerance = 1e-8;
  rep.worst_margin = std::min({-res_a, margin_b, -res_c});
  rep.constants["residual_sum"] = res_a;
  rep.constants["bound_lhs"] = lhs_b;
  rep.constants["bound_rhs"] = rhs_b;
  rep.constants["residual_product"] = res_c;
  rep.finalize();
  (void)n;
  return rep;
}

Matrix eigen_oracle(const std::function<Complex(Complex)>& f, const Matrix& A) {
  require_square(A, "eigen_oracle");
  if (!is_normal(A)) throw DomainError("eigen_oracle: matrix is not normal");
  return schur_apply(A, f);
}

}  // namespace bfcalc
