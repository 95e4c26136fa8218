#include "costbc/rng.hpp"

#include <vector>

#include "test_util.hpp"

using namespace costbc;

int main() {
  // identical (seed, stream) reproduces identical vectors
  {
    RngStream a(42, 7);
    RngStream b(42, 7);
    const CVector va = a.sample_cn(1000);
    const CVector vb = b.sample_cn(1000);
    CHECK(va == vb);
  }

  // chunked draws equal one contiguous draw (counter consistency)
  {
    RngStream a(42, 9);
    RngStream b(42, 9);
    CVector first = a.sample_cn(17);
    const CVector rest = a.sample_cn(23);
    first.insert(first.end(), rest.begin(), rest.end());
    CHECK(first == b.sample_cn(40));
  }

  // distinct stream ids decorrelate
  {
    RngStream a(42, 1);
    RngStream b(42, 2);
    const CVector va = a.sample_cn(100000);
    const CVector vb = b.sample_cn(100000);
    CHECK(va != vb);
    cplx cross{0.0, 0.0};
    for (std::size_t k = 0; k < va.size(); ++k) cross += va[k] * std::conj(vb[k]);
    CHECK(std::abs(cross) / va.size() < 4.0 / std::sqrt(static_cast<double>(va.size())));
  }

  // law of large numbers: |mean| < 0.005 over 1e6 draws
  {
    RngStream s(1, 100);
    cplx mean{0.0, 0.0};
    double power = 0.0;
    const std::size_t n = 1000000;
    for (std::size_t k = 0; k < n; ++k) {
      const cplx v = s.next_cn();
      mean += v;
      power += std::norm(v);
    }
    mean /= static_cast<double>(n);
    power /= static_cast<double>(n);
    CHECK(std::abs(mean) < 0.005);
    CHECK_NEAR(power, 1.0, 0.005);
  }

  // per-component variance split: E[Re^2] = E[Im^2] = 1/2
  {
    RngStream s(2, 100);
    double re2 = 0.0, im2 = 0.0;
    const std::size_t n = 500000;
    for (std::size_t k = 0; k < n; ++k) {
      const cplx v = s.next_cn();
      re2 += v.real() * v.real();
      im2 += v.imag() * v.imag();
    }
    CHECK_NEAR(re2 / n, 0.5, 0.005);
    CHECK_NEAR(im2 / n, 0.5, 0.005);
  }

  // uniform doubles stay inside (0, 1)
  {
    RngStream s(3, 5);
    bool in_range = true;
    for (int k = 0; k < 100000; ++k) {
      const double u = s.next_open_double();
      in_range = in_range && u > 0.0 && u < 1.0;
    }
    CHECK(in_range);
  }

  // stream id packing keeps (frame, purpose, attempt) disjoint
  {
    CHECK(make_stream_id(5, stream_purpose::kTxBits) != make_stream_id(5, stream_purpose::kHopChannel));
    CHECK(make_stream_id(5, stream_purpose::kTxBits) != make_stream_id(6, stream_purpose::kTxBits));
    CHECK(make_stream_id(5, stream_purpose::kHopChannel, 0) !=
          make_stream_id(5, stream_purpose::kHopChannel, 1));
  }

  return testutil::summary("rng");
}
