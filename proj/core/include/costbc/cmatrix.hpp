#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace costbc {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

// Small dense complex matrix, row-major. Everything in this domain is <= 8x8,
// so no blocking, no views, no expression templates.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols);
  CMatrix(std::size_t rows, std::size_t cols, std::initializer_list<cplx> entries);

  static CMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  const std::vector<cplx>& data() const { return data_; }

  CVector col(std::size_t c) const;

  bool all_finite() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

CMatrix matmul(const CMatrix& a, const CMatrix& b);
CMatrix conj_transpose(const CMatrix& a);
CMatrix add(const CMatrix& a, const CMatrix& b);
CMatrix sub(const CMatrix& a, const CMatrix& b);
CMatrix scale(const CMatrix& a, cplx factor);

// y = A * x
CVector mul_vec(const CMatrix& a, const CVector& x);

// max_{i,j} |a_ij - b_ij|
double max_abs_diff(const CMatrix& a, const CMatrix& b);
double max_abs(const CMatrix& a);

// Largest eigenvalue of a Hermitian PSD matrix (dimension <= 8).
// Closed form for 1x1/2x2, power iteration to relative tolerance 1e-10 above.
// Rejects inputs whose Hermitian asymmetry exceeds 1e-9.
double max_eigenvalue_hermitian(const CMatrix& a);

// Same, also returning a unit eigenvector for the largest eigenvalue.
std::pair<double, CVector> max_eigenpair_hermitian(const CMatrix& a);

}  // namespace costbc
