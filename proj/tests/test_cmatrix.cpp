#include "costbc/cmatrix.hpp"

#include <vector>

#include "costbc/rng.hpp"
#include "test_util.hpp"

using namespace costbc;

namespace {

// schoolbook triple-loop product, independent of the library path
CMatrix schoolbook(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      cplx acc{0.0, 0.0};
      for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      out(i, j) = acc;
    }
  return out;
}

CMatrix random_matrix(RngStream& s, std::size_t r, std::size_t c) {
  CMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = s.next_cn();
  return m;
}

// cyclic-Jacobi eigenvalue sweep for Hermitian matrices; independent of the
// power-iteration path under test
double jacobi_max_eigenvalue(CMatrix a) {
  const std::size_t n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (off < 1e-26) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        if (std::abs(apq) < 1e-300) continue;
        // unitary 2x2 diagonalization of [[app, apq], [apq*, aqq]]
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const cplx phase = apq / std::abs(apq);
        const double tau = (aqq - app) / (2.0 * std::abs(apq));
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const cplx s = t * c * phase;
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          a(k, p) = c * akp - std::conj(s) * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k);
          const cplx aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = std::conj(s) * apk + c * aqk;
        }
      }
  }
  double best = a(0, 0).real();
  for (std::size_t i = 1; i < n; ++i) best = std::max(best, a(i, i).real());
  return best;
}

}  // namespace

int main() {
  const cplx i{0.0, 1.0};

  // identity product
  {
    RngStream s(11, 1);
    const CMatrix x = random_matrix(s, 2, 2);
    CHECK(max_abs_diff(matmul(CMatrix::identity(2), x), x) == 0.0);
  }

  // Alamouti row orthogonality at s = (1, i)
  {
    const CMatrix x(2, 2, {1.0, i, i, 1.0});
    const CMatrix want = scale(CMatrix::identity(2), 2.0);
    CHECK(max_abs_diff(matmul(x, conj_transpose(x)), want) <= 1e-15);
  }

  // random 4x4 products match the schoolbook oracle
  {
    RngStream s(12, 1);
    for (int t = 0; t < 50; ++t) {
      const CMatrix a = random_matrix(s, 4, 4);
      const CMatrix b = random_matrix(s, 4, 4);
      CHECK(max_abs_diff(matmul(a, b), schoolbook(a, b)) <= 1e-12);
    }
  }

  // dimension mismatch rejected
  CHECK_THROWS(matmul(CMatrix(2, 3), CMatrix(2, 3)));

  // conj_transpose basics
  {
    CHECK(max_abs_diff(conj_transpose(CMatrix::identity(2)), CMatrix::identity(2)) == 0.0);
    const CMatrix m(1, 1, {i});
    CHECK(std::abs(conj_transpose(m)(0, 0) - (-i)) == 0.0);
    RngStream s(13, 1);
    const CMatrix x = random_matrix(s, 3, 5);
    CHECK(max_abs_diff(conj_transpose(conj_transpose(x)), x) == 0.0);
  }

  // (AB)* = B* A* within 1e-12
  {
    RngStream s(14, 1);
    for (int t = 0; t < 50; ++t) {
      const CMatrix a = random_matrix(s, 3, 4);
      const CMatrix b = random_matrix(s, 4, 2);
      CHECK(max_abs_diff(conj_transpose(matmul(a, b)),
                         matmul(conj_transpose(b), conj_transpose(a))) <= 1e-12);
    }
  }

  // max eigenvalue: fixed cases
  CHECK_NEAR(max_eigenvalue_hermitian(CMatrix::identity(3)), 1.0, 1e-12);
  {
    CMatrix d(2, 2);
    d(0, 0) = 5.0;
    d(1, 1) = 2.0;
    CHECK_NEAR(max_eigenvalue_hermitian(d), 5.0, 1e-12);
  }

  // random G*G (4x4): Jacobi oracle within 1e-6, Rayleigh sampling lower bound
  {
    RngStream s(15, 1);
    for (int t = 0; t < 20; ++t) {
      const CMatrix g = random_matrix(s, 4, 4);
      const CMatrix h = matmul(conj_transpose(g), g);
      const double lam = max_eigenvalue_hermitian(h);
      CHECK_NEAR(lam, jacobi_max_eigenvalue(h), 1e-6 * std::max(1.0, lam));

      double best_quotient = 0.0;
      for (int probe = 0; probe < 10000; ++probe) {
        CVector x = s.sample_cn(4);
        double xn = 0.0;
        cplx q{0.0, 0.0};
        for (std::size_t a = 0; a < 4; ++a) {
          xn += std::norm(x[a]);
          for (std::size_t b = 0; b < 4; ++b) q += std::conj(x[a]) * h(a, b) * x[b];
        }
        best_quotient = std::max(best_quotient, q.real() / xn);
      }
      CHECK(best_quotient <= lam * (1.0 + 1e-9));
      CHECK(best_quotient >= 0.8 * lam);  // sampled quotient approaches lambda_max from below
    }
  }

  // homogeneity: lambda_max(c A) = c lambda_max(A) for c > 0
  {
    RngStream s(16, 1);
    const CMatrix g = random_matrix(s, 4, 4);
    const CMatrix h = matmul(conj_transpose(g), g);
    const double lam = max_eigenvalue_hermitian(h);
    const double lam3 = max_eigenvalue_hermitian(scale(h, 3.5));
    CHECK_NEAR(lam3, 3.5 * lam, 1e-9 * lam3);
  }

  // non-Hermitian rejected
  {
    CMatrix bad(2, 2, {1.0, cplx{0.0, 1e-6}, cplx{0.0, 1e-6}, 1.0});
    CHECK_THROWS(max_eigenvalue_hermitian(bad));
  }

  // eigenpair: A v = lambda v
  {
    RngStream s(17, 1);
    const CMatrix g = random_matrix(s, 3, 3);
    const CMatrix h = matmul(conj_transpose(g), g);
    const auto [lam, v] = max_eigenpair_hermitian(h);
    const CVector hv = mul_vec(h, v);
    for (std::size_t a = 0; a < 3; ++a) CHECK_NEAR(std::abs(hv[a] - lam * v[a]), 0.0, 1e-8 * lam);
  }

  // finite entries after products of finite inputs
  {
    RngStream s(18, 1);
    const CMatrix a = random_matrix(s, 8, 8);
    CHECK(matmul(a, conj_transpose(a)).all_finite());
  }

  return testutil::summary("cmatrix");
}
