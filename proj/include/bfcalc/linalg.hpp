#pragma once

#include <cstdint>
#include <shared_mutex>
#include <unordered_map>

#include <Eigen/Dense>

#include "bfcalc/types.hpp"

namespace bfcalc {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr int max_dimension = 64;

double spectral_norm(const Matrix& m);
// smallest singular value
double min_singular_value(const Matrix& m);

// (z + A)^{-1}; throws NearSpectrumError when z + A is numerically singular.
Matrix resolvent(const Matrix& A, Complex z);

// Scaling and squaring with Pade approximants up to order 13.
Matrix expm(const Matrix& A);

// (e^{X} - I) X^{-1}, valid for singular X
Matrix phi1(const Matrix& X);

bool is_normal(const Matrix& A, double rel_tol = 1e-12);
std::uint64_t fingerprint(const Matrix& A);

// Memoizes e^{-sA} for one matrix. Concurrent reads, idempotent inserts.
class ExpmCache {
 public:
  explicit ExpmCache(Matrix A);
  const Matrix& matrix() const { return A_; }
  std::uint64_t key() const { return key_; }
  Matrix semigroup(double s) const;

 private:
  Matrix A_;
  std::uint64_t key_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<std::uint64_t, Matrix> cache_;
};

void require_square(const Matrix& A, const char* what);

}  // namespace bfcalc
