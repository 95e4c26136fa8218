#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "costbc/channel.hpp"
#include "costbc/cmatrix.hpp"
#include "costbc/constellation.hpp"
#include "costbc/dispersion.hpp"
#include "costbc/ostbc.hpp"

namespace costbc {

// Realized per-stage powers: E_0 for the source, E_n per relay of stage n.
struct Allocation {
  double source_power = 0.0;
  std::vector<double> relay_power;
};

// E_0 = E/N, E_n = E/(N*M_n): every stage spends E/N per time instant.
Allocation equal_allocation(double e_total, const std::vector<std::size_t>& antennas);

// fractions = (f_0, f_1, .., f_{N-1}) with f_0 + sum_n M_n f_n = 1; E_0 = f_0*E,
// E_n = f_n*E. Rejects violations beyond 1e-9 and non-positive stage powers.
Allocation custom_allocation(double e_total, const std::vector<double>& fractions,
                             const std::vector<std::size_t>& antennas);

struct AllocationPolicy {
  enum class Kind { Equal, Fractions };
  Kind kind = Kind::Equal;
  std::vector<double> fractions;

  Allocation realize(double e_total, const std::vector<std::size_t>& antennas) const {
    return kind == Kind::Equal ? equal_allocation(e_total, antennas)
                               : custom_allocation(e_total, fractions, antennas);
  }
  std::string describe() const;
};

// lcm-based buffering between a rate-L_src source design and rate-L_relay
// relay dispersion: `chunk` source symbols are accumulated over `src_blocks`
// source blocks and re-dispersed over `relay_blocks` relay blocks, each block
// carrying the contiguous symbol indices listed in `assignment`.
struct BlockSchedule {
  std::size_t chunk = 0;
  std::size_t src_blocks = 0;
  std::size_t relay_blocks = 0;
  std::vector<std::vector<std::size_t>> assignment;
};

BlockSchedule build_schedule(std::size_t src_l, std::size_t relay_l);

struct NetworkConfig {
  std::string preset = "custom";
  std::vector<std::size_t> antennas;  // M_0 .. M_N
  OstbcDesign source_design;
  std::vector<DispersionSet> relay_sets;  // relay stages 1 .. N-1
  Constellation constellation;
  double total_power = 0.0;
  Allocation allocation;
  BlockSchedule schedule;
  FadingModel fading{};

  std::size_t hops() const { return antennas.size() - 1; }
  std::size_t symbols_per_frame() const { return schedule.chunk; }
  std::size_t bits_per_frame() const {
    return schedule.chunk * static_cast<std::size_t>(constellation.bits_per_symbol);
  }

  // Throws std::invalid_argument naming the offending field on violations.
  void validate() const;
};

// min over hops of M_n * M_{n+1}
std::size_t diversity_upper_bound(const NetworkConfig& config);

// Named configurations: "2hop_2x2xD", "2hop_4x4xD", "2hop_4x2xD",
// "3hop_2x2x2xD" with D the destination antenna count.
NetworkConfig make_preset(const std::string& name, double e_total,
                          const AllocationPolicy& policy = {});
std::vector<std::string> shipped_presets();

// Per-stage transmit normalizers, computed once per configuration before any
// parallel phase. gamma_sym[n-1] is the per-symbol second moment of the
// separated values entering relay stage n (closed form for stage 1, seeded
// calibration Monte Carlo above), amplitude[n-1] the resulting relay transmit factor.
struct StageConstants {
  std::vector<double> gamma_sym;
  std::vector<double> amplitude;
  std::vector<double> gain_m2;  // E[gain^2] of the separated values entering stage n
};

StageConstants calibrate(const NetworkConfig& config, std::uint64_t seed,
                         std::size_t trials = 100000);

// Expected squared norm of the separated-symbol vector entering `stage`, in
// the symbol normalization gamma_stage1 uses; stage 1 reproduces gamma_stage1
// exactly, later stages come from the calibration.
double stage_gamma_general(std::size_t stage, const NetworkConfig& config,
                           const StageConstants& consts);

// One receiving node's view of the frame after symbol separation.
struct NodeObservation {
  CVector values;                  // unit-noise normalized, source-symbol order
  double gain = 0.0;               // values = gain * s + CN(0,1)
  double assumed_noise_var = 1.0;  // input-noise variance fed to the matched filter
  double channel_energy = 0.0;     // sum |phi|^2 of the incoming effective channel
};

struct FrameTrace {
  std::uint64_t frame_id = 0;
  std::vector<int> tx_bits;
  CVector tx_symbols;
  // stage_rx[s]: receivers of stage s+1 (s = 0: first relay stage, back(): destination antennas)
  std::vector<std::vector<NodeObservation>> stage_rx;
  // raw received blocks at the destination, one M_{N-1} x M_N matrix per relay block
  std::vector<CMatrix> dest_received;
  std::vector<double> stage_amplitude;  // relay transmit factor per relay stage
  double source_energy = 0.0;           // actual transmitted energy this frame
  std::vector<double> relay_energy;     // per relay stage
  std::uint64_t attempt = 0;            // resample attempt that produced this trace
};

struct RunOptions {
  bool noiseless = false;
};

// Executes one full source-to-destination cascade over the given realization.
// Receive noise is derived from (seed, frame_id, stage), so a frame is a pure
// function of (config, realization, seed). Throws DegenerateChannel on an
// all-zero fading column.
FrameTrace run_frame(const NetworkConfig& config, const StageConstants& consts,
                     const ChannelRealization& realization, std::uint64_t seed,
                     const RunOptions& opts = {});

// Same, with caller-chosen source symbols (tx_bits left empty if the symbols
// are not constellation points, e.g. all-zero noise probes).
FrameTrace run_frame_with_symbols(const NetworkConfig& config, const StageConstants& consts,
                                  const ChannelRealization& realization, std::uint64_t seed,
                                  const CVector& symbols, const RunOptions& opts = {});

// Frame runner with the degenerate-draw resample policy: redraws the channel
// with a bumped attempt tag until the cascade succeeds.
FrameTrace run_frame_resampled(const NetworkConfig& config, const StageConstants& consts,
                               std::uint64_t frame_id, std::uint64_t seed,
                               const RunOptions& opts = {});

}  // namespace costbc
