#include "bfcalc/linalg.hpp"

#include <bit>
#include <cmath>
#include <mutex>

namespace bfcalc {

void require_square(const Matrix& A, const char* what) {
  if (A.rows() != A.cols() || A.rows() == 0) throw DomainError(std::string(what) + ": matrix must be square and non-empty");
  if (A.rows() > max_dimension) throw DomainError(std::string(what) + ": dimension exceeds 64");
  if (!A.allFinite()) throw DomainError(std::string(what) + ": matrix has non-finite entries");
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == 1 || m.cols() == 1) return m.norm();
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double min_singular_value(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

Matrix resolvent(const Matrix& A, Complex z) {
  Matrix B = A;
  B.diagonal().array() += z;
  Eigen::PartialPivLU<Matrix> lu(B);
  const double rc = lu.rcond();
  if (!(rc > 1e-14)) throw NearSpectrumError("resolvent: -z is numerically in the spectrum", min_singular_value(B));
  return lu.inverse();
}

namespace {

const double pade3[] = {120.0, 60.0, 12.0, 1.0};
const double pade5[] = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
const double pade7[] = {17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0};
const double pade9[] = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
                        2162160.0,     110880.0,     3960.0,       90.0,        1.0};
const double pade13[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
                         129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
                         1323241920.0,        40840800.0,          960960.0,           16380.0,
                         182.0,               1.0};

Matrix pade_low(const Matrix& A, const double* b, int m) {
  const Index n = A.rows();
  const Matrix I = Matrix::Identity(n, n);
  const Matrix A2 = A * A;
  Matrix U = b[1] * I, V = b[0] * I;
  Matrix P = I;
  for (int k = 2; k <= m; k += 2) {
    P = P * A2;
    U += b[k + 1] * P;
    V += b[k] * P;
  }
  U = A * U;
  return (V - U).partialPivLu().solve(V + U);
}

Matrix pade13_eval(const Matrix& A) {
  const double* b = pade13;
  const Index n = A.rows();
  const Matrix I = Matrix::Identity(n, n);
  const Matrix A2 = A * A, A4 = A2 * A2, A6 = A4 * A2;
  Matrix U = A * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I);
  Matrix V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
  return (V - U).partialPivLu().solve(V + U);
}

}  // namespace

Matrix expm(const Matrix& A) {
  require_square(A, "expm");
  const double n1 = A.cwiseAbs().colwise().sum().maxCoeff();
  if (n1 <= 1.495585217958292e-2) return pade_low(A, pade3, 3);
  if (n1 <= 2.539398330063230e-1) return pade_low(A, pade5, 5);
  if (n1 <= 9.504178996162932e-1) return pade_low(A, pade7, 7);
  if (n1 <= 2.097847961257068) return pade_low(A, pade9, 9);
  const double theta13 = 5.371920351148152;
  int s = std::max(0, int(std::ceil(std::log2(n1 / theta13))));
  Matrix E = pade13_eval(A / std::ldexp(1.0, s));
  for (int i = 0; i < s; ++i) E = E * E;
  return E;
}

Matrix phi1(const Matrix& X) {
  const Index n = X.rows();
  Matrix B = Matrix::Zero(2 * n, 2 * n);
  B.topLeftCorner(n, n) = X;
  B.topRightCorner(n, n) = Matrix::Identity(n, n);
  return expm(B).topRightCorner(n, n);
}

bool is_normal(const Matrix& A, double rel_tol) {
  const double scale = std::max(1e-300, A.squaredNorm());
  return (A.adjoint() * A - A * A.adjoint()).norm() <= rel_tol * scale;
}

std::uint64_t fingerprint(const Matrix& A) {
  // FNV-1a over the raw bits
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  mix(std::uint64_t(A.rows()));
  for (Index j = 0; j < A.cols(); ++j)
    for (Index i = 0; i < A.rows(); ++i) {
      mix(std::bit_cast<std::uint64_t>(A(i, j).real()));
      mix(std::bit_cast<std::uint64_t>(A(i, j).imag()));
    }
  return h;
}

ExpmCache::ExpmCache(Matrix A) : A_(std::move(A)), key_(fingerprint(A_)) { require_square(A_, "ExpmCache"); }

Matrix ExpmCache::semigroup(double s) const {
  const std::uint64_t k = std::bit_cast<std::uint64_t>(s);
  {
    std::shared_lock lock(mutex_);
    auto it = cache_.find(k);
    if (it != cache_.end()) return it->second;
  }
  Matrix E = expm(-s * A_);
  std::unique_lock lock(mutex_);
  if (cache_.size() > 200000) cache_.clear();
  cache_.emplace(k, E);
  return E;
}

}  // namespace bfcalc
