#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bfcalc/kernels.hpp"
#include "bfcalc/measure.hpp"

namespace bfcalc {

struct LevyTriple {
  double a = 0.0;
  double b = 0.0;
  RadonMeasure mu;
};

class StieltjesCBF;

class BernsteinFn {
 public:
  enum class Kind { Affine, Power, Log1p, OneMinusExp, Levy, Sum, Compose };

  struct Node {
    Kind kind = Kind::Affine;
    double a = 0.0, b = 0.0;      // affine, levy
    double alpha = 1.0;           // power
    double c = 1.0, r = 1.0;      // one-minus-exp
    RadonMeasure mu;              // levy
    std::vector<BernsteinFn> children;  // sum terms, or {outer, inner}
  };

  static BernsteinFn affine(double a, double b);
  static BernsteinFn power(double alpha);
  static BernsteinFn log1p();
  static BernsteinFn one_minus_exp(double c = 1.0, double r = 1.0);
  static BernsteinFn levy(LevyTriple t);
  static BernsteinFn sum(std::vector<BernsteinFn> terms);
  static BernsteinFn compose(BernsteinFn outer, BernsteinFn inner);

  Kind kind() const { return node_->kind; }
  const Node& node() const { return *node_; }

  // a + b z + int (1 - e^{-zs}) mu(ds), Re z >= 0
  Complex operator()(Complex z) const;
  // k = 1..3, Re z > 0
  Complex derivative(Complex z, int k) const;
  // Analytic continuation off the closed half-plane when one is available.
  Complex extended(Complex z) const;
  bool has_extension() const;

  std::optional<LevyTriple> triple() const;
  // Same function, evaluated through its Levy triple.
  BernsteinFn as_levy() const;
  // Known Stieltjes representation (complete Bernstein functions only).
  std::optional<StieltjesCBF> stieltjes() const;

  std::string describe() const;

 private:
  explicit BernsteinFn(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

class StieltjesCBF {
 public:
  StieltjesCBF(double a, double b, RadonMeasure sigma);
  double a() const { return a_; }
  double b() const { return b_; }
  const RadonMeasure& sigma() const { return sigma_; }
  // a + b lambda + int lambda/(lambda+s) sigma(ds), lambda off (-inf, 0]
  Complex operator()(Complex lambda) const;

 private:
  double a_, b_;
  RadonMeasure sigma_;
};

// 1/psi
class PotentialFn {
 public:
  explicit PotentialFn(BernsteinFn psi);
  Complex operator()(Complex z) const { return 1.0 / psi_(z); }
  const BernsteinFn& psi() const { return psi_; }

 private:
  BernsteinFn psi_;
};

// phi(lambda) = a + b lambda + int lambda s/(1 + lambda s) mu(ds)
class AssociatedCbf {
 public:
  struct PowerPart {
    double alpha;
  };
  struct AtomsPart {
    double c, r;
  };

  explicit AssociatedCbf(const BernsteinFn& psi);

  Complex operator()(Complex lambda) const;
  // d = 1, 2
  Complex derivative(Complex lambda, int d) const;
  // psi(lambda) - phi(lambda) = int Delta(lambda s) mu(ds)
  Complex psi_minus_phi(Complex lambda) const;
  StieltjesCBF stieltjes() const;

  double a() const { return a_; }
  double b() const { return b_; }
  // lim phi(t) as t -> inf
  double at_infinity() const { return at_infinity_; }
  // phi'(0+) = b + int s mu(ds), possibly infinite
  double slope_at_zero() const { return slope_at_zero_; }

 private:
  double a_ = 0.0, b_ = 0.0;
  std::vector<PowerPart> powers_;
  std::vector<AtomsPart> atoms_;
  std::vector<RadonMeasure> measures_;
  double at_infinity_ = inf;
  double slope_at_zero_ = inf;
};

AssociatedCbf associated_cbf(const BernsteinFn& psi);

// 1/(z + psi(lambda)) - 1/(z + phi(lambda))
Complex resolvent_diff_scalar(const BernsteinFn& psi, Complex lambda, Complex z);
Complex resolvent_diff_scalar(const BernsteinFn& psi, const AssociatedCbf& phi, Complex lambda, Complex z);

QuadTol default_tolerance();

}  // namespace bfcalc
