#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "bfcalc/linalg.hpp"

namespace bfcalc {

struct SupPlan {
  int radii = 64;
  int angles = 17;
  double decades = 6.0;  // radii span center * 10^{+-decades}
  int refine_steps = 40;
};

struct SupEstimate {
  double value = 0.0;
  Complex worst_z = 0.0;
  int evaluations = 0;
  // (log|z|, value) pairs visited during refinement
  std::vector<std::pair<double, double>> history;
};

// sup of ||z (z + X)^{-1}|| over the closed sector |arg z| <= half_angle (half_angle = 0: the positive axis).
SupEstimate resolvent_sup(const Matrix& X, double half_angle, const SupPlan& plan = {});
// sup of ||g(z)|| over the same sampling grid for a user map
SupEstimate sector_sup(const std::function<double(Complex)>& g, double half_angle, double center, const SupPlan& plan = {});

class SectorialMatrix {
 public:
  const Matrix& A() const { return A_; }
  Index dim() const { return A_.rows(); }
  const Vector& eigenvalues() const { return eig_; }
  double omega_hat() const { return omega_; }
  // sup_{s > 0} ||s (s + A)^{-1}||
  double M_hat() const { return M_.value; }
  const SupEstimate& M_estimate() const { return M_; }
  double norm() const { return norm_; }
  double min_modulus() const { return min_mod_; }
  // geometric mean of eigenvalue moduli, used to center sampling grids
  double center() const { return center_; }
  bool normal() const { return normal_; }
  const ExpmCache& semigroup() const { return *cache_; }
  // sup over |arg z| <= half_angle of ||z (z + A)^{-1}||
  SupEstimate sector_constant(double half_angle, const SupPlan& plan = {}) const;

  friend SectorialMatrix make_sectorial(const Matrix& A, const SupPlan& plan);

 private:
  Matrix A_;
  Vector eig_;
  double omega_ = 0.0;
  SupEstimate M_;
  double norm_ = 0.0, min_mod_ = 0.0, center_ = 1.0;
  bool normal_ = false;
  std::shared_ptr<ExpmCache> cache_;
};

SectorialMatrix make_sectorial(const Matrix& A, const SupPlan& plan = {});

}  // namespace bfcalc
