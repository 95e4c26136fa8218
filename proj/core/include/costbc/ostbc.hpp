#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "costbc/cmatrix.hpp"

namespace costbc {

// Thrown when a fading draw is degenerate (all-zero channel); callers resample.
struct DegenerateChannel : std::runtime_error {
  DegenerateChannel() : std::runtime_error("degenerate all-zero channel draw") {}
};

// Orthogonal design over L complex symbols with K antennas = K time slots.
// Codeword = nu * sum_l (C_l * s_l + D_l * conj(s_l)), nu = 1/sqrt(L), so that
// a unit-energy constellation gives E tr(S* S) = K.
struct OstbcDesign {
  std::string name;
  std::size_t K = 0;
  std::size_t L = 0;
  std::vector<CMatrix> C;  // per symbol, K x K
  std::vector<CMatrix> D;  // per symbol, K x K
  double nu = 1.0;
};

// Alamouti code, K = L = 2: [[s1, s2], [-s2*, s1*]].
const OstbcDesign& alamouti_design();

// Rate-3/4 code for 4 antennas, K = 4, L = 3.
const OstbcDesign& rate34_design();

const OstbcDesign& design_by_name(const std::string& name);

CMatrix encode(const OstbcDesign& d, const CVector& s);

// max |X X* - nu^2 (sum |s_l|^2) I| for X = encode(d, s)
double orthogonality_defect(const OstbcDesign& d, const CVector& s);

// Per-symbol matched-filter outputs normalized to unit noise variance:
// values = gain * s + CN(0,1) white, gain = tx_amp * nu * sqrt(sum|h|^2) / sqrt(var).
struct SeparatedSymbols {
  CVector values;
  double gain = 0.0;
  double noise_var = 1.0;
};

SeparatedSymbols matched_filter(const OstbcDesign& d, const CVector& received,
                                const CVector& channel, double tx_amp, double input_noise_var);

}  // namespace costbc
