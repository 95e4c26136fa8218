#include "costbc/ostbc.hpp"

#include <cmath>

namespace costbc {

namespace {

OstbcDesign make_alamouti() {
  OstbcDesign d;
  d.name = "alamouti";
  d.K = 2;
  d.L = 2;
  d.nu = 1.0 / std::sqrt(2.0);
  d.C.assign(2, CMatrix(2, 2));
  d.D.assign(2, CMatrix(2, 2));
  d.C[0](0, 0) = 1.0;   // s1
  d.D[0](1, 1) = 1.0;   // s1*
  d.C[1](0, 1) = 1.0;   // s2
  d.D[1](1, 0) = -1.0;  // -s2*
  return d;
}

OstbcDesign make_rate34() {
  OstbcDesign d;
  d.name = "ostbc4_r34";
  d.K = 4;
  d.L = 3;
  d.nu = 1.0 / std::sqrt(3.0);
  d.C.assign(3, CMatrix(4, 4));
  d.D.assign(3, CMatrix(4, 4));
  // [[ s1,   s2,   s3,  0  ]
  //  [-s2*,  s1*,  0,   s3 ]
  //  [ s3*,  0,   -s1*, s2 ]
  //  [ 0,    s3*, -s2*, -s1]]
  d.C[0](0, 0) = 1.0;
  d.C[0](3, 3) = -1.0;
  d.D[0](1, 1) = 1.0;
  d.D[0](2, 2) = -1.0;
  d.C[1](0, 1) = 1.0;
  d.C[1](2, 3) = 1.0;
  d.D[1](1, 0) = -1.0;
  d.D[1](3, 2) = -1.0;
  d.C[2](0, 2) = 1.0;
  d.C[2](1, 3) = 1.0;
  d.D[2](2, 0) = 1.0;
  d.D[2](3, 1) = 1.0;
  return d;
}

}  // namespace

const OstbcDesign& alamouti_design() {
  static const OstbcDesign d = make_alamouti();
  return d;
}

const OstbcDesign& rate34_design() {
  static const OstbcDesign d = make_rate34();
  return d;
}

const OstbcDesign& design_by_name(const std::string& name) {
  if (name == "alamouti") return alamouti_design();
  if (name == "ostbc4_r34") return rate34_design();
  throw std::invalid_argument("unknown OSTBC design: " + name);
}

CMatrix encode(const OstbcDesign& d, const CVector& s) {
  if (s.size() != d.L) throw std::invalid_argument("encode: symbol count does not match design L");
  CMatrix x(d.K, d.K);
  for (std::size_t l = 0; l < d.L; ++l) {
    const cplx sl = s[l];
    const cplx slc = std::conj(sl);
    for (std::size_t i = 0; i < d.K; ++i)
      for (std::size_t j = 0; j < d.K; ++j) x(i, j) += d.C[l](i, j) * sl + d.D[l](i, j) * slc;
  }
  return scale(x, d.nu);
}

double orthogonality_defect(const OstbcDesign& d, const CVector& s) {
  const CMatrix x = encode(d, s);
  const CMatrix g = matmul(x, conj_transpose(x));
  double e = 0.0;
  for (const cplx& v : s) e += std::norm(v);
  CMatrix target = scale(CMatrix::identity(d.K), d.nu * d.nu * e);
  return max_abs_diff(g, target);
}

SeparatedSymbols matched_filter(const OstbcDesign& d, const CVector& received,
                                const CVector& channel, double tx_amp, double input_noise_var) {
  if (received.size() != d.K) throw std::invalid_argument("matched_filter: received length != K");
  if (channel.size() != d.K) throw std::invalid_argument("matched_filter: channel length != K");
  if (input_noise_var <= 0.0)
    throw std::invalid_argument("matched_filter: input noise variance must be > 0");

  double p = 0.0;
  for (const cplx& h : channel) p += std::norm(h);
  if (p == 0.0) throw DegenerateChannel{};

  const double denom = std::sqrt(p) * std::sqrt(input_noise_var);
  SeparatedSymbols out;
  out.values.resize(d.L);
  out.gain = tx_amp * d.nu * std::sqrt(p) / std::sqrt(input_noise_var);
  out.noise_var = 1.0;
  for (std::size_t l = 0; l < d.L; ++l) {
    cplx m{0.0, 0.0};
    for (std::size_t t = 0; t < d.K; ++t) {
      cplx u{0.0, 0.0};
      cplx v{0.0, 0.0};
      for (std::size_t j = 0; j < d.K; ++j) {
        u += d.C[l](t, j) * channel[j];
        v += d.D[l](t, j) * channel[j];
      }
      m += std::conj(u) * received[t] + v * std::conj(received[t]);
    }
    out.values[l] = m / denom;
  }
  return out;
}

}  // namespace costbc
