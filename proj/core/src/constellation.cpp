#include "costbc/constellation.hpp"

#include <cmath>
#include <stdexcept>

namespace costbc {

int Constellation::nearest(cplx z, double gain) const {
  int best = 0;
  double best_d = std::norm(z - gain * points[0]);
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double d = std::norm(z - gain * points[i]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

const Constellation& qam4() {
  static const Constellation c = [] {
    constexpr double a = 0.70710678118654752440084436210485;
    Constellation q;
    q.name = "qam4";
    q.bits_per_symbol = 2;
    // index = (b1 << 1) | b0 read MSB-first from the bit pair; b1 flips the
    // real part, b0 the imaginary part, which is a Gray labelling.
    q.points = {cplx{a, a}, cplx{a, -a}, cplx{-a, a}, cplx{-a, -a}};
    return q;
  }();
  return c;
}

std::vector<cplx> bits_to_symbols(const std::vector<int>& bits, const Constellation& c) {
  const int bps = c.bits_per_symbol;
  if (bits.size() % static_cast<std::size_t>(bps) != 0)
    throw std::invalid_argument("bits_to_symbols: bit count not divisible by bits_per_symbol");
  std::vector<cplx> out(bits.size() / bps);
  for (std::size_t s = 0; s < out.size(); ++s) {
    int word = 0;
    for (int b = 0; b < bps; ++b) word = (word << 1) | (bits[s * bps + b] & 1);
    out[s] = c.points[word];
  }
  return out;
}

std::vector<int> symbols_to_bits(const std::vector<int>& point_indices, const Constellation& c) {
  const int bps = c.bits_per_symbol;
  std::vector<int> bits(point_indices.size() * bps);
  for (std::size_t s = 0; s < point_indices.size(); ++s) {
    const int word = point_indices[s];
    for (int b = 0; b < bps; ++b) bits[s * bps + b] = (word >> (bps - 1 - b)) & 1;
  }
  return bits;
}

std::vector<int> indices_of_symbols(const std::vector<cplx>& symbols, const Constellation& c) {
  std::vector<int> idx(symbols.size());
  for (std::size_t s = 0; s < symbols.size(); ++s) idx[s] = c.nearest(symbols[s]);
  return idx;
}

}  // namespace costbc
