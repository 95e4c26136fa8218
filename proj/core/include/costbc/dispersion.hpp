#pragma once

#include <string>
#include <vector>

#include "costbc/cmatrix.hpp"
#include "costbc/ostbc.hpp"

namespace costbc {

// Per-relay linear-dispersion pairs (A_k, B_k), each M x L: relay k transmits
// a scaled A_k r + B_k conj(r). Stacking the relay columns over symbolic input
// realizes `outgoing` (up to the design's nu scaling).
struct DispersionSet {
  std::string name;
  std::size_t relay_count = 0;  // M: relays = time slots of the stage codeword
  std::size_t L = 0;            // incoming separated symbols consumed per block
  std::vector<CMatrix> A;
  std::vector<CMatrix> B;
  OstbcDesign outgoing;  // derived from (A, B) column stacking
};

const DispersionSet& alamouti_pair();
const DispersionSet& ostbc4_r34_set();
const DispersionSet& mixed_4to2();  // Alamouti pair applied per scheduled 2-symbol block
const DispersionSet& dispersion_by_name(const std::string& name);

// Builds the stage OSTBC realized by the stacked relay columns:
// column k of the codeword is A_k s + B_k conj(s).
OstbcDesign derive_outgoing_design(const std::string& name, const std::vector<CMatrix>& A,
                                   const std::vector<CMatrix>& B);

struct ConstraintReport {
  struct Entry {
    std::size_t relay;
    std::string constraint;
    double violation;
    bool pass;
  };
  std::vector<Entry> entries;
  double max_violation = 0.0;
  bool pass = true;
};

// Checks, per relay: A_k* B_k = -B_k* A_k, unit column traces
// tr(A_k(l)* A_k(l) + B_k(l)* B_k(l)) = 1, and that the stacked codeword is an
// orthogonal design (random-probe check).
ConstraintReport validate_dispersion(const DispersionSet& set, double tol = 1e-12);

// gamma = E r*r for the first relay stage with unit-energy constituent
// symbols of the un-normalized design: L*(E0*M0 + 1).
double gamma_stage1(double e0, double m0, double l);

// Transmit scaling inputs for one relay stage. `gamma` is the per-symbol
// second moment of the incoming separated values (E|r_l|^2), which makes the
// measured per-relay power at any time instant equal energy_per_instant.
struct StagePower {
  double energy_per_instant = 0.0;  // E_n
  double gamma = 1.0;
};

// t_k = sqrt(E_n M / (L gamma)) * (A_k r + B_k conj(r))
CVector relay_transmit(const DispersionSet& set, std::size_t k, const SeparatedSymbols& separated,
                       const StagePower& power);

}  // namespace costbc
