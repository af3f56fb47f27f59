#include "bfcalc/quadrature.hpp"

#include <map>
#include <memory>
#include <mutex>

#include <boost/math/special_functions/gamma.hpp>

namespace bfcalc {

namespace {

Rule golub_welsch(int n, double alpha, double beta) {
  // Jacobi weight (1-x)^alpha (1+x)^beta on [-1, 1].
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  const double ab = alpha + beta;
  for (int k = 0; k < n; ++k) {
    if (k == 0) {
      J(0, 0) = (beta - alpha) / (ab + 2.0);
    } else {
      const double t = 2.0 * k + ab;
      J(k, k) = (beta * beta - alpha * alpha) / (t * (t + 2.0));
    }
  }
  for (int k = 1; k < n; ++k) {
    const double t = 2.0 * k + ab;
    double b2;
    if (k == 1) {
      b2 = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      b2 = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (t * t * (t + 1.0) * (t - 1.0));
    }
    J(k, k - 1) = J(k - 1, k) = std::sqrt(b2);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + boost::math::lgamma(alpha + 1.0) +
                              boost::math::lgamma(beta + 1.0) - boost::math::lgamma(ab + 2.0));
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    r.x[i] = es.eigenvalues()(i);
    const double v = es.eigenvectors()(0, i);
    r.w[i] = mu0 * v * v;
  }
  return r;
}

Rule legendre_newton(int n) {
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  if (n % 2 == 1) r.x[n / 2] = 0.0;
  return r;
}

std::mutex& rule_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

const Rule& gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: n must be positive");
  static std::map<int, std::unique_ptr<Rule>> cache;
  std::lock_guard<std::mutex> lock(rule_mutex());
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Rule>(n == 1 ? Rule{{0.0}, {2.0}} : legendre_newton(n));
  return *slot;
}

const Rule& gauss_jacobi01(int n, double a) {
  if (n < 1) throw DomainError("gauss_jacobi01: n must be positive");
  if (!(a > -1.0)) throw AdmissibilityError("gauss_jacobi01: endpoint exponent must exceed -1");
  static std::map<std::pair<int, double>, std::unique_ptr<Rule>> cache;
  std::lock_guard<std::mutex> lock(rule_mutex());
  auto& slot = cache[{n, a}];
  if (!slot) {
    Rule r = golub_welsch(n, 0.0, a);
    const double scale = std::pow(2.0, -a - 1.0);
    for (int i = 0; i < n; ++i) {
      r.x[i] = 0.5 * (1.0 + r.x[i]);
      r.w[i] *= scale;
    }
    slot = std::make_unique<Rule>(std::move(r));
  }
  return *slot;
}

}  // namespace bfcalc
