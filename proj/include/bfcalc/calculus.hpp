#pragma once

#include <functional>
#include <string>

#include "bfcalc/bernstein.hpp"
#include "bfcalc/geometry.hpp"
#include "bfcalc/sectorial.hpp"

namespace bfcalc {

QuadTol matrix_tolerance();

// aI + bA + int A (s + A)^{-1} sigma(ds)
Matrix hirsch_apply(const StieltjesCBF& phi, const SectorialMatrix& A, const QuadTol& tol = matrix_tolerance());
// aI + bA + int (I - e^{-sA}) mu(ds); needs a Levy triple and spectrum in the closed right half-plane.
Matrix levy_apply(const BernsteinFn& psi, const SectorialMatrix& A, const QuadTol& tol = matrix_tolerance());
// phi(A) for the associated complete Bernstein function
Matrix associated_apply(const AssociatedCbf& phi, const SectorialMatrix& A, const QuadTol& tol = matrix_tolerance());
// bI + int e^{-sA}(I - e^{-eps s}) mu(ds) = [psi(. + eps) - psi](A)
Matrix shift_apply(const BernsteinFn& psi, const SectorialMatrix& A, double eps, const QuadTol& tol = matrix_tolerance());

// Boundary of the sector |arg l| < beta, traversed in along arg = beta and out along arg = -beta.
struct SectorContour {
  double beta;
  double u_min = 0.0, u_max = 0.0;  // log-radial truncation, filled in by contour_apply
  double truncation = 0.0;          // estimated size of the discarded tails
  int evaluations = 0;
};

// (1/2 pi i) int f(l) (l - A)^{-1} dl over the contour. `analyticity` is the half-angle of the sector where f is
// holomorphic. f must vanish at 0 and at infinity.
Matrix contour_apply(const std::function<Complex(Complex)>& f, const SectorialMatrix& A, SectorContour& contour,
                     double analyticity = pi, double tol = 1e-11);

// (A^r + z)^{-1} by Kato's real-line integral
Matrix kato_fracpow_resolvent(const SectorialMatrix& A, double r, Complex z, double gamma);
// M sin(pi r)/(pi r) (pi r + gamma)/sin(pi r + gamma) / |z|
double kato_bound(double M, double r, double gamma, Complex z);

// || (z + psi(A))^{-1} - (z + phi(A))^{-1} - r(A; z) ||
struct ResidualReport {
  double residual = 0.0;
  double scale = 0.0;  // || (z + psi(A))^{-1} ||
  double beta = 0.0;
};
ResidualReport resolvent_identity_residual(const BernsteinFn& psi, const SectorialMatrix& A, Complex z,
                                           double omega = 0.0);
// Same, for several z sharing psi(A) and phi(A)
std::vector<ResidualReport> resolvent_identity_residuals(const BernsteinFn& psi, const SectorialMatrix& A,
                                                        const std::vector<Complex>& zs, double omega = 0.0);

// Constant of the fractional-power estimate: M(A) + 2 M(A, b) / (pi cos(b/2) cos(q b/2)),
// b = (alpha + (pi - gamma)/q)/2, where M(A, b) is the sup over the sector of half-angle pi - b.
struct MnConstant {
  double value, beta, M, M_beta;
};
MnConstant mn_constant(const SectorialMatrix& A, double alpha, double q, double gamma);

struct BoundParams {
  double q = 0.0;       // 0 picks a default inside the admissible range
  double gamma = 0.0;   // 0 picks a default
  double r = 0.5;       // ZZZ
  double theta = 0.0;   // AESA: 0 means pi/2 - omega_hat
  SupPlan plan;
};
// ids: FRPOW1, SUPG, MES0, AEST, AESA, ZZZ, FPSI
CheckReport bound_suite(const BernsteinFn& psi, const SectorialMatrix& A, const std::string& id,
                        const BoundParams& p = {});
const std::vector<std::string>& bound_suite_ids();

// (a) sum rule residual, (b) shift bound margin, (c) product decomposition residual at time t.
CheckReport shift_identity_check(const BernsteinFn& psi, const SectorialMatrix& A, double eps, double d, double t);

// U diag(f(l_i)) U* for normal A; refuses non-normal input.
Matrix eigen_oracle(const std::function<Complex(Complex)>& f, const Matrix& A);

// sup_t ||e^{-tA}|| on a log grid
double semigroup_bound(const SectorialMatrix& A);

}  // namespace bfcalc
