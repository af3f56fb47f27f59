#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bfcalc/calculus.hpp"

namespace bfcalc {

// mu_t as atoms (locations >= 0) plus an absolutely continuous part
struct TimeMeasure {
  std::vector<Atom> atoms;
  RadonMeasure continuous;
};

class SubordinatorFamily {
 public:
  enum class Kind { Gamma, StableHalf, Poisson, Identity, Composed };

  static SubordinatorFamily gamma();
  static SubordinatorFamily stable_half();
  static SubordinatorFamily poisson(double c = 1.0);
  // nu_s = delta_s
  static SubordinatorFamily identity();
  // eta_t(d tau) = int nu_s(d tau) mu_t(ds), Laplace exponent outer o inner
  static SubordinatorFamily composed(SubordinatorFamily outer, SubordinatorFamily inner);

  Kind kind() const { return kind_; }
  double c() const { return c_; }
  const SubordinatorFamily& outer() const { return children_->first; }
  const SubordinatorFamily& inner() const { return children_->second; }
  std::string name() const;
  BernsteinFn psi() const;
  bool has_density() const;

  // Density of the absolutely continuous part of mu_t at s > 0.
  double density(double t, double s) const;
  // d/dt of the density (Gamma, StableHalf)
  double density_dt(double t, double s) const;
  // Atomic part of mu_t, truncated once the remaining mass is below 1e-17.
  std::vector<Atom> atoms(double t) const;
  // Gamma, StableHalf, Poisson, Identity; t >= 0
  TimeMeasure measure(double t) const;

  // int e^{-z s} mu_t(ds) by quadrature, Re z >= 0
  Complex laplace(double t, Complex z) const;
  Complex laplace_exact(double t, Complex z) const { return std::exp(-t * psi()(z)); }
  double mass(double t) const;

 private:
  SubordinatorFamily(Kind k, double c) : kind_(k), c_(c) {}
  Kind kind_;
  double c_ = 1.0;
  std::shared_ptr<const std::pair<SubordinatorFamily, SubordinatorFamily>> children_;
};

// int e^{-sA} mu_t(ds)
Matrix subordinate_matrix(const SubordinatorFamily& f, const SectorialMatrix& A, double t,
                          const QuadTol& tol = matrix_tolerance());

// max over z of |mu_t^(z) mu_s^(z) - mu_{t+s}^(z)|
CheckReport semigroup_property_check(const SubordinatorFamily& f, double t, double s, const std::vector<Complex>& zs);
// max over (t, z) of |mu_t^(z) - e^{-t psi(z)}|
CheckReport laplace_consistency_check(const SubordinatorFamily& f, const std::vector<double>& ts,
                                      const std::vector<Complex>& zs);

struct T1Row {
  double t;
  double norm;     // ||mu_t'|| in total variation
  double product;  // t ||mu_t'||
};
struct T1Table {
  std::vector<T1Row> rows;
  double max_product = 0.0;
  bool bounded = false;
  // psi bounded: the diagnostic carries no holomorphy information
  bool degenerate = false;
  std::string note;
};
// t = 1, 1/2, ..., 2^{-levels}
T1Table t1_diagnostic(const SubordinatorFamily& f, int levels = 10);

struct DensityRow {
  double tau;
  double value;
};
// Density of the absolutely continuous part of eta_t on the grid
std::vector<DensityRow> compose_subordinator(const SubordinatorFamily& outer, const SubordinatorFamily& inner, double t,
                                             const std::vector<double>& taus);

// sup of ||exp(-tau psi(A))|| over tau in the sector |arg tau| <= half_angle
double holomorphy_probe(const BernsteinFn& psi, const SectorialMatrix& A, double half_angle, int radii = 25,
                        int angles = 9);

}  // namespace bfcalc
