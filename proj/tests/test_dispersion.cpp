#include "costbc/dispersion.hpp"

#include <vector>

#include "costbc/constellation.hpp"
#include "costbc/rng.hpp"
#include "test_util.hpp"

using namespace costbc;

int main() {
  const DispersionSet& pair = alamouti_pair();
  const DispersionSet& quad = ostbc4_r34_set();

  // shipped sets satisfy every dispersion-pair constraint
  for (const DispersionSet* set : {&pair, &quad, &mixed_4to2()}) {
    const ConstraintReport rep = validate_dispersion(*set);
    CHECK(rep.pass);
    CHECK(rep.max_violation <= 1e-10);
  }

  // per-relay total trace of the 4-antenna set is 3 (1 per column)
  for (std::size_t k = 0; k < 4; ++k) {
    double tr = 0.0;
    for (std::size_t t = 0; t < 4; ++t)
      for (std::size_t l = 0; l < 3; ++l) tr += std::norm(quad.A[k](t, l)) + std::norm(quad.B[k](t, l));
    CHECK_NEAR(tr, 3.0, 1e-15);
  }

  // scaling A_1 by 2 breaks the trace constraint with violation 3.0
  {
    DispersionSet bad = pair;
    bad.A[0] = scale(bad.A[0], 2.0);
    const ConstraintReport rep = validate_dispersion(bad);
    CHECK(!rep.pass);
    double trace_violation = 0.0;
    for (const auto& e : rep.entries)
      if (e.relay == 0 && e.constraint == "unit_column_trace") trace_violation = e.violation;
    CHECK_NEAR(trace_violation, 3.0, 1e-12);
  }

  // stacked columns realize the derived stage design: independent stacking check
  {
    RngStream s(31, 1);
    for (const DispersionSet* set : {&pair, &quad}) {
      for (int t = 0; t < 200; ++t) {
        const CVector sym = s.sample_cn(set->L);
        CMatrix stacked(set->relay_count, set->relay_count);
        for (std::size_t k = 0; k < set->relay_count; ++k)
          for (std::size_t row = 0; row < set->relay_count; ++row) {
            cplx acc{0.0, 0.0};
            for (std::size_t l = 0; l < set->L; ++l)
              acc += set->A[k](row, l) * sym[l] + set->B[k](row, l) * std::conj(sym[l]);
            stacked(row, k) = acc;
          }
        const CMatrix via_design = scale(encode(set->outgoing, sym), 1.0 / set->outgoing.nu);
        CHECK(max_abs_diff(stacked, via_design) <= 1e-12);
      }
    }
  }

  // cascaded Alamouti stage codeword is [[s1, -s2*], [s2, s1*]]
  {
    RngStream s(32, 1);
    const CVector sym = s.sample_cn(2);
    const CMatrix x = scale(encode(pair.outgoing, sym), 1.0 / pair.outgoing.nu);
    CHECK(std::abs(x(0, 0) - sym[0]) <= 1e-15);
    CHECK(std::abs(x(1, 0) - sym[1]) <= 1e-15);
    CHECK(std::abs(x(0, 1) + std::conj(sym[1])) <= 1e-15);
    CHECK(std::abs(x(1, 1) - std::conj(sym[0])) <= 1e-15);
  }

  // relay_transmit closed forms for the Alamouti pair
  {
    SeparatedSymbols sep;
    sep.values = {cplx{0.25, -1.5}, cplx{-0.75, 0.5}};
    sep.gain = 1.0;
    const StagePower power{3.0, 2.5};  // E_1 = 3, gamma = 2.5
    const double amp = std::sqrt(3.0 * 2.0 / (2.0 * 2.5));
    const CVector t0 = relay_transmit(pair, 0, sep, power);
    CHECK(std::abs(t0[0] - amp * sep.values[0]) <= 1e-15);
    CHECK(std::abs(t0[1] - amp * sep.values[1]) <= 1e-15);
    const CVector t1 = relay_transmit(pair, 1, sep, power);
    CHECK(std::abs(t1[0] + amp * std::conj(sep.values[1])) <= 1e-15);
    CHECK(std::abs(t1[1] - amp * std::conj(sep.values[0])) <= 1e-15);
    CHECK_THROWS(relay_transmit(pair, 2, sep, power));
    SeparatedSymbols bad;
    bad.values = CVector(3);
    CHECK_THROWS(relay_transmit(pair, 0, bad, power));
  }

  // stacked relay transmissions with unit-gain separated inputs reproduce the
  // scaled stage codeword
  {
    RngStream s(33, 1);
    const StagePower power{2.0, 4.0};
    const double amp = std::sqrt(2.0 * 2.0 / (2.0 * 4.0));
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
      SeparatedSymbols sep;
      sep.values = s.sample_cn(2);
      sep.gain = 1.0;
      CMatrix stacked(2, 2);
      for (std::size_t k = 0; k < 2; ++k) {
        const CVector tk = relay_transmit(pair, k, sep, power);
        stacked(0, k) = tk[0];
        stacked(1, k) = tk[1];
      }
      const CMatrix want =
          scale(encode(pair.outgoing, sep.values), amp / pair.outgoing.nu);
      worst = std::max(worst, max_abs_diff(stacked, want));
    }
    CHECK(worst <= 1e-10);
  }

  // gamma_stage1 formula
  CHECK_NEAR(gamma_stage1(2.0, 2.0, 2.0), 10.0, 1e-15);
  CHECK_NEAR(gamma_stage1(0.0, 2.0, 2.0), 2.0, 1e-15);
  CHECK_NEAR(gamma_stage1(0.0, 4.0, 3.0), 3.0, 1e-15);
  CHECK_THROWS(gamma_stage1(1.0, -2.0, 2.0));

  // Monte Carlo oracle for gamma_stage1 = E r*r under the formula's symbol
  // normalization (unit-energy constituent symbols, un-scaled design):
  // driving the matched filter at tx_amp = sqrt(E0 L) realizes that convention.
  {
    const OstbcDesign& ala = alamouti_design();
    const Constellation& c = qam4();
    const double e0 = 1.0;
    RngStream s(34, 1);
    double acc = 0.0;
    const std::size_t trials = 100000;
    for (std::size_t t = 0; t < trials; ++t) {
      CVector sym(2);
      for (cplx& v : sym) v = c.points[s.next_u64() & 3];
      const CVector h = s.sample_cn(2);
      CVector y = mul_vec(encode(ala, sym), h);
      const double amp = std::sqrt(e0 * 2.0);
      for (std::size_t k = 0; k < 2; ++k) y[k] = amp * y[k] + s.next_cn();
      const SeparatedSymbols sep = matched_filter(ala, y, h, amp, 1.0);
      for (const cplx& v : sep.values) acc += std::norm(v);
    }
    CHECK_NEAR(acc / trials, gamma_stage1(e0, 2.0, 2.0), 0.1);  // 6 +- 0.1
  }

  // per-relay transmit power: E |t_k|^2 / M = E_1 within 2% through the full
  // stage-1 pipeline at E_1 = 1
  {
    const OstbcDesign& ala = alamouti_design();
    const Constellation& c = qam4();
    const double e0 = 2.0;
    const double gamma_sym = e0 * 2.0 * ala.nu * ala.nu + 1.0;  // per-symbol E|r_l|^2
    const StagePower power{1.0, gamma_sym};
    RngStream s(35, 1);
    double acc = 0.0;
    const std::size_t trials = 1000000;
    for (std::size_t t = 0; t < trials; ++t) {
      CVector sym(2);
      for (cplx& v : sym) v = c.points[s.next_u64() & 3];
      const CVector h = s.sample_cn(2);
      CVector y = mul_vec(encode(ala, sym), h);
      const double amp = std::sqrt(e0);
      for (std::size_t k = 0; k < 2; ++k) y[k] = amp * y[k] + s.next_cn();
      const SeparatedSymbols sep = matched_filter(ala, y, h, amp, 1.0);
      const CVector tk = relay_transmit(pair, t & 1, sep, power);
      for (const cplx& v : tk) acc += std::norm(v);
    }
    CHECK_NEAR(acc / trials / 2.0, 1.0, 0.02);
  }

  // permuting relays permutes stage-codeword columns and still validates
  {
    DispersionSet perm = pair;
    std::swap(perm.A[0], perm.A[1]);
    std::swap(perm.B[0], perm.B[1]);
    perm.outgoing = derive_outgoing_design("perm_stage", perm.A, perm.B);
    CHECK(validate_dispersion(perm).pass);
    RngStream s(36, 1);
    const CVector sym = s.sample_cn(2);
    const CMatrix orig = scale(encode(pair.outgoing, sym), 1.0 / pair.outgoing.nu);
    const CMatrix swapped = scale(encode(perm.outgoing, sym), 1.0 / perm.outgoing.nu);
    for (std::size_t row = 0; row < 2; ++row) {
      CHECK(std::abs(orig(row, 0) - swapped(row, 1)) <= 1e-15);
      CHECK(std::abs(orig(row, 1) - swapped(row, 0)) <= 1e-15);
    }
  }

  return testutil::summary("dispersion");
}
