#include "costbc/cmatrix.hpp"

#include <cmath>
#include <stdexcept>

namespace costbc {

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("CMatrix: rows and cols must be >= 1");
}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::initializer_list<cplx> entries)
    : CMatrix(rows, cols) {
  if (entries.size() != rows * cols)
    throw std::invalid_argument("CMatrix: initializer size does not match rows*cols");
  std::size_t i = 0;
  for (const cplx& e : entries) data_[i++] = e;
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CVector CMatrix::col(std::size_t c) const {
  CVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

bool CMatrix::all_finite() const {
  for (const cplx& v : data_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: dimension mismatch");
  CMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{0.0, 0.0}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

CMatrix conj_transpose(const CMatrix& a) {
  CMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
  return out;
}

CMatrix add(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("add: dimension mismatch");
  CMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) + b(i, j);
  return out;
}

CMatrix sub(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("sub: dimension mismatch");
  CMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) - b(i, j);
  return out;
}

CMatrix scale(const CMatrix& a, cplx factor) {
  CMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = factor * a(i, j);
  return out;
}

CVector mul_vec(const CMatrix& a, const CVector& x) {
  if (a.cols() != x.size()) throw std::invalid_argument("mul_vec: dimension mismatch");
  CVector y(a.rows(), cplx{0.0, 0.0});
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("max_abs_diff: dimension mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

double max_abs(const CMatrix& a) {
  double m = 0.0;
  for (const cplx& v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

namespace {

void require_hermitian(const CMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("max_eigenvalue_hermitian: not square");
  if (a.rows() > 8) throw std::invalid_argument("max_eigenvalue_hermitian: dimension > 8");
  double asym = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      asym = std::max(asym, std::abs(a(i, j) - std::conj(a(j, i))));
  if (asym > 1e-9) throw std::invalid_argument("max_eigenvalue_hermitian: input not Hermitian");
}

// Deterministic start vector, dense in every eigenspace with probability 1.
CVector power_start(std::size_t n) {
  CVector v(n);
  double x = 0.754877666246693;  // arbitrary irrational-ish seed point
  for (std::size_t i = 0; i < n; ++i) {
    x = x * 997.0 + 0.127 * static_cast<double>(i + 1);
    x -= std::floor(x);
    double y = x * 613.0 + 0.911;
    y -= std::floor(y);
    v[i] = cplx{x - 0.5, y - 0.5};
  }
  return v;
}

double norm2(const CVector& v) {
  double s = 0.0;
  for (const cplx& e : v) s += std::norm(e);
  return std::sqrt(s);
}

}  // namespace

std::pair<double, CVector> max_eigenpair_hermitian(const CMatrix& a) {
  require_hermitian(a);
  const std::size_t n = a.rows();
  if (n == 1) return {a(0, 0).real(), CVector{cplx{1.0, 0.0}}};
  if (n == 2) {
    const double p = a(0, 0).real();
    const double q = a(1, 1).real();
    const cplx b = a(0, 1);
    const double disc = std::sqrt(0.25 * (p - q) * (p - q) + std::norm(b));
    const double lam = 0.5 * (p + q) + disc;
    CVector v(2);
    // eigenvector of [[p, b], [b*, q]] for lam
    if (std::abs(b) > 0.0) {
      v[0] = b;
      v[1] = cplx{lam - p, 0.0};
    } else {
      v[0] = (p >= q) ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
      v[1] = (p >= q) ? cplx{0.0, 0.0} : cplx{1.0, 0.0};
    }
    const double nn = norm2(v);
    if (nn > 0.0)
      for (cplx& e : v) e /= nn;
    return {lam, v};
  }

  CVector v = power_start(n);
  double nn = norm2(v);
  for (cplx& e : v) e /= nn;
  double lam = 0.0;
  for (int it = 0; it < 50000; ++it) {
    CVector w = mul_vec(a, v);
    const double wn = norm2(w);
    if (wn == 0.0) return {0.0, v};  // zero matrix
    // Rayleigh quotient and residual of the current iterate
    cplx rq{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) rq += std::conj(v[i]) * w[i];
    const double lam_new = rq.real();
    double resid = 0.0;
    for (std::size_t i = 0; i < n; ++i) resid += std::norm(w[i] - lam_new * v[i]);
    resid = std::sqrt(resid);
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / wn;
    const double scale = std::max(std::abs(lam_new), 1e-30);
    if (it > 0 && std::abs(lam_new - lam) <= 1e-10 * scale && resid <= 1e-9 * scale) {
      lam = lam_new;
      break;
    }
    lam = lam_new;
  }
  return {lam, v};
}

double max_eigenvalue_hermitian(const CMatrix& a) { return max_eigenpair_hermitian(a).first; }

}  // namespace costbc
