#pragma once

#include <vector>

#include "costbc/constellation.hpp"
#include "costbc/network.hpp"

namespace costbc {

struct SymbolDecision {
  std::vector<int> indices;  // constellation point index per symbol
  std::vector<int> bits;
  double metric_margin = 0.0;  // decision-metric gap to the runner-up
};

enum class Combiner {
  MatchedSum,     // unweighted sum of per-antenna matched-filter outputs
  NoiseWeighted,  // 1/sigma^2-weighted variant (not used in acceptance runs)
};

// Per-symbol nearest-point decisions on the antenna-combined matched-filter
// outputs; ties break toward the lowest constellation index.
SymbolDecision per_symbol_detect(const FrameTrace& trace, const Constellation& constellation,
                                 Combiner combiner = Combiner::MatchedSum);

// Brute-force ML reference over the full codebook, evaluating the exact
// Gaussian likelihood of the raw destination blocks with the true forwarded-
// noise covariance. Desk-scale oracle: 2-hop networks, |C|^L <= 4096.
SymbolDecision joint_ml_detect(const NetworkConfig& config, const StageConstants& consts,
                               const FrameTrace& trace, const ChannelRealization& realization);

}  // namespace costbc
