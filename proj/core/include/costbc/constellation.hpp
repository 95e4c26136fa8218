#pragma once

#include <string>
#include <vector>

#include "costbc/cmatrix.hpp"

namespace costbc {

// Gray-labelled constellation with unit average energy. Point index equals the
// Gray bit word (MSB first), so bit<->index mapping is the identity on words.
struct Constellation {
  std::string name;
  std::vector<cplx> points;
  int bits_per_symbol = 0;

  std::size_t size() const { return points.size(); }

  // Nearest point to z given an effective channel amplitude applied to every
  // candidate; ties break toward the lowest index.
  int nearest(cplx z, double gain = 1.0) const;
};

// 4-QAM at unit energy, bits (b1 b0) -> sign of real/imag: 00 -> (1+i)/sqrt(2).
const Constellation& qam4();

std::vector<cplx> bits_to_symbols(const std::vector<int>& bits, const Constellation& c);
std::vector<int> symbols_to_bits(const std::vector<int>& point_indices, const Constellation& c);
std::vector<int> indices_of_symbols(const std::vector<cplx>& symbols, const Constellation& c);

}  // namespace costbc
