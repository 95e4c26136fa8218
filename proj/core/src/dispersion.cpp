#include "costbc/dispersion.hpp"

#include <cmath>

#include "costbc/rng.hpp"

namespace costbc {

OstbcDesign derive_outgoing_design(const std::string& name, const std::vector<CMatrix>& A,
                                   const std::vector<CMatrix>& B) {
  const std::size_t m = A.size();
  const std::size_t l_count = A[0].cols();
  OstbcDesign d;
  d.name = name;
  d.K = m;
  d.L = l_count;
  d.nu = 1.0 / std::sqrt(static_cast<double>(l_count));
  d.C.assign(l_count, CMatrix(m, m));
  d.D.assign(l_count, CMatrix(m, m));
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t l = 0; l < l_count; ++l)
      for (std::size_t t = 0; t < m; ++t) {
        d.C[l](t, k) = A[k](t, l);
        d.D[l](t, k) = B[k](t, l);
      }
  return d;
}

namespace {

DispersionSet make_alamouti_pair(const std::string& name) {
  DispersionSet s;
  s.name = name;
  s.relay_count = 2;
  s.L = 2;
  s.A.assign(2, CMatrix(2, 2));
  s.B.assign(2, CMatrix(2, 2));
  s.A[0] = CMatrix::identity(2);
  s.B[1] = CMatrix(2, 2, {0.0, -1.0, 1.0, 0.0});
  s.outgoing = derive_outgoing_design(name + "_stage", s.A, s.B);
  return s;
}

DispersionSet make_rate34_set() {
  DispersionSet s;
  s.name = "ostbc4_r34_set";
  s.relay_count = 4;
  s.L = 3;
  s.A.assign(4, CMatrix(4, 3));
  s.B.assign(4, CMatrix(4, 3));
  s.A[0](0, 0) = 1.0;
  s.A[1](0, 1) = 1.0;
  s.A[2](0, 2) = 1.0;
  s.A[3](1, 2) = 1.0;
  s.A[3](2, 1) = 1.0;
  s.A[3](3, 0) = -1.0;
  s.B[0](1, 1) = -1.0;
  s.B[0](2, 2) = 1.0;
  s.B[1](1, 0) = 1.0;
  s.B[1](3, 2) = 1.0;
  s.B[2](2, 0) = -1.0;
  s.B[2](3, 1) = -1.0;
  s.outgoing = derive_outgoing_design("ostbc4_r34_stage", s.A, s.B);
  return s;
}

}  // namespace

const DispersionSet& alamouti_pair() {
  static const DispersionSet s = make_alamouti_pair("alamouti_pair");
  return s;
}

const DispersionSet& ostbc4_r34_set() {
  static const DispersionSet s = make_rate34_set();
  return s;
}

const DispersionSet& mixed_4to2() {
  static const DispersionSet s = make_alamouti_pair("mixed_4to2");
  return s;
}

const DispersionSet& dispersion_by_name(const std::string& name) {
  if (name == "alamouti_pair") return alamouti_pair();
  if (name == "ostbc4_r34_set") return ostbc4_r34_set();
  if (name == "mixed_4to2") return mixed_4to2();
  throw std::invalid_argument("unknown dispersion set: " + name);
}

ConstraintReport validate_dispersion(const DispersionSet& set, double tol) {
  ConstraintReport rep;
  auto push = [&](std::size_t relay, const std::string& what, double violation) {
    const bool ok = violation <= tol;
    rep.entries.push_back({relay, what, violation, ok});
    rep.max_violation = std::max(rep.max_violation, violation);
    rep.pass = rep.pass && ok;
  };

  for (std::size_t k = 0; k < set.relay_count; ++k) {
    const CMatrix& a = set.A[k];
    const CMatrix& b = set.B[k];
    // A_k* B_k = -B_k* A_k
    const CMatrix lhs = matmul(conj_transpose(a), b);
    const CMatrix rhs = scale(matmul(conj_transpose(b), a), -1.0);
    push(k, "skew_pair", max_abs_diff(lhs, rhs));

    // unit column traces
    double worst = 0.0;
    for (std::size_t l = 0; l < set.L; ++l) {
      double col = 0.0;
      for (std::size_t t = 0; t < a.rows(); ++t) col += std::norm(a(t, l)) + std::norm(b(t, l));
      worst = std::max(worst, std::abs(col - 1.0));
    }
    push(k, "unit_column_trace", worst);
  }

  // stacked codeword must be an orthogonal design (probe with random symbols)
  const OstbcDesign stage = derive_outgoing_design(set.name + "_probe", set.A, set.B);
  RngStream probe(0x0571BCu, 1);
  double worst = 0.0;
  for (int trial = 0; trial < 64; ++trial) {
    const CVector s = probe.sample_cn(set.L);
    // un-scaled design: defect against (sum |s|^2) I
    const CMatrix x = scale(encode(stage, s), 1.0 / stage.nu);
    double e = 0.0;
    for (const cplx& v : s) e += std::norm(v);
    worst = std::max(worst,
                     max_abs_diff(matmul(x, conj_transpose(x)),
                                  scale(CMatrix::identity(stage.K), e)));
  }
  rep.entries.push_back({set.relay_count, "stacked_ostbc", worst, worst <= 1e-10});
  rep.max_violation = std::max(rep.max_violation, worst);
  rep.pass = rep.pass && worst <= 1e-10;
  return rep;
}

double gamma_stage1(double e0, double m0, double l) {
  if (e0 < 0.0 || m0 <= 0.0 || l <= 0.0)
    throw std::invalid_argument("gamma_stage1: arguments must be positive (E0 >= 0)");
  return l * (e0 * m0 + 1.0);
}

CVector relay_transmit(const DispersionSet& set, std::size_t k, const SeparatedSymbols& separated,
                       const StagePower& power) {
  if (k >= set.relay_count) throw std::invalid_argument("relay_transmit: relay index out of range");
  if (separated.values.size() != set.L)
    throw std::invalid_argument("relay_transmit: separated symbol count != L");
  const double m = static_cast<double>(set.relay_count);
  const double l = static_cast<double>(set.L);
  const double amp = std::sqrt(power.energy_per_instant * m / (l * power.gamma));
  const CMatrix& a = set.A[k];
  const CMatrix& b = set.B[k];
  CVector t(set.relay_count, cplx{0.0, 0.0});
  for (std::size_t row = 0; row < set.relay_count; ++row) {
    cplx acc{0.0, 0.0};
    for (std::size_t col = 0; col < set.L; ++col)
      acc += a(row, col) * separated.values[col] + b(row, col) * std::conj(separated.values[col]);
    t[row] = amp * acc;
  }
  return t;
}

}  // namespace costbc
