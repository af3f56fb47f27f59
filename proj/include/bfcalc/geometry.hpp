#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bfcalc/bernstein.hpp"

namespace bfcalc {

struct Sector {
  double half_angle;
  std::optional<double> radius;
  bool upper_half = false;

  explicit Sector(double beta, std::optional<double> R = std::nullopt, bool upper = false);
  bool contains(Complex z, double slack = 0.0) const;
};

struct CheckReport {
  std::string id;
  long samples = 0;
  double worst_margin = inf;
  Complex worst_lambda = 0.0;
  Complex worst_z = 0.0;
  bool pass = true;
  double tolerance = 1e-9;
  std::map<std::string, double> constants;
  std::string note;

  // pass <=> worst_margin >= -tolerance
  void finalize() { pass = worst_margin >= -tolerance; }
};

struct SamplingPlan {
  int radii = 64;
  int angles = 33;
  double r_min = 1e-6;
  double r_max = 1e6;
  bool refine = true;
  int refine_steps = 40;
  double tolerance = 1e-9;
};

// ids: FEH, RE, R1, CPSI, LOW, AREP1, L12, L22, SECT
CheckReport check_inequality(const std::string& id, const BernsteinFn& psi, const SamplingPlan& plan = {});
const std::vector<std::string>& inequality_ids();

// a + b + int_0^1 s mu(ds) + 2 mu([1, inf))
double growth_constant(const BernsteinFn& psi);

struct ShrinkAngles {
  double theta0;
  double theta_tilde;
};
ShrinkAngles cbf_shrink_angles(double gamma, double theta);

// Samples psi over the closed sector of half-angle theta, reporting the upper-half reading
// (arg psi in [0, theta~] for arg lambda in [0, theta]) and the full-sector reading.
struct ShrinkReport {
  CheckReport upper_half;
  CheckReport full_sector;
};
ShrinkReport check_cbf_sector_shrink(const BernsteinFn& psi, double gamma, double theta, const SamplingPlan& plan = {});

struct ContourBoundResult {
  double integral = 0.0;          // over the truncated contour
  double truncation = 0.0;        // rigorous bound for the discarded tails
  double bound = 0.0;             // 8 / (cos^2 b cos^2((w+b)/2) |z|)
  double u_min = 0.0, u_max = 0.0;
  double quadrature_error = 0.0;
  bool pass = false;
  double margin = 0.0;            // (bound - integral - truncation) / bound
  int evaluations = 0;
};
ContourBoundResult contour_bound_check(const BernsteinFn& psi, Complex z, double omega, double beta,
                                       double rel_tol = 1e-6);

enum class AngleMode { BHH0, BHH, BHHT, CK };
// extra is gamma for BHH0, theta0 for BHHT, theta for CK; unused for BHH.
double improving_angles(AngleMode mode, double theta1, double theta2, double extra = 0.0);

enum class CkMode { Run, CKr };
// Run: arg(psi(lambda) + beta) within [-gamma, gamma] over the closed right half-plane.
// CKr: 0 <= arg psi(lambda) <= pi/2 over the upper closed sector of half-angle theta, |lambda| >= r.
CheckReport carasso_kato_check(const BernsteinFn& psi, CkMode mode, double gamma, double beta, double theta, double r,
                               const SamplingPlan& plan = {});

struct RatioRow {
  double r;
  double theta;
  Complex ratio;
  double deviation;  // |ratio - e^{i alpha theta}|
};
std::vector<RatioRow> fujita_ratio_probe(const BernsteinFn& psi, double alpha, const std::vector<double>& thetas,
                                         const std::vector<double>& rs);

}  // namespace bfcalc
