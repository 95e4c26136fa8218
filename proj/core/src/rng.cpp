#include "costbc/rng.hpp"

#include <cmath>

namespace costbc {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint64_t, 4> RngStream::philox_block() const {
  std::uint32_t c0 = static_cast<std::uint32_t>(counter_);
  std::uint32_t c1 = static_cast<std::uint32_t>(counter_ >> 32);
  std::uint32_t c2 = id_lo_;
  std::uint32_t c3 = id_hi_;
  std::uint32_t k0 = key0_;
  std::uint32_t k1 = key1_;
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, c0, hi0, lo0);
    mulhilo(kPhiloxM1, c2, hi1, lo1);
    const std::uint32_t n0 = hi1 ^ c1 ^ k0;
    const std::uint32_t n1 = lo1;
    const std::uint32_t n2 = hi0 ^ c3 ^ k1;
    const std::uint32_t n3 = lo0;
    c0 = n0;
    c1 = n1;
    c2 = n2;
    c3 = n3;
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  return {c0, c1, c2, c3};
}

std::pair<double, double> RngStream::next_gaussian_pair() {
  const double u1 = next_open_double();
  const double u2 = next_open_double();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 6.283185307179586476925286766559 * u2;
  return {r * std::cos(t), r * std::sin(t)};
}

cplx RngStream::next_cn() {
  const auto [x, y] = next_gaussian_pair();
  constexpr double inv_sqrt2 = 0.70710678118654752440084436210485;
  return cplx{x * inv_sqrt2, y * inv_sqrt2};
}

void RngStream::fill_cn(CVector& out, std::size_t n) {
  out.resize(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = next_cn();
}

}  // namespace costbc
