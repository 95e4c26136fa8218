#pragma once

#include <array>
#include <cstdint>

#include "costbc/cmatrix.hpp"

namespace costbc {

// Counter-based random stream (Philox4x32-10). A stream is fully identified by
// (master_seed, stream_id); identical pairs reproduce identical draw sequences
// and distinct stream_ids are statistically independent, so per-frame streams
// can be derived on any worker without shared state.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
      : key0_(static_cast<std::uint32_t>(master_seed)),
        key1_(static_cast<std::uint32_t>(master_seed >> 32)),
        id_lo_(static_cast<std::uint32_t>(stream_id)),
        id_hi_(static_cast<std::uint32_t>(stream_id >> 32)) {}

  std::uint64_t next_u64() {
    refill_if_needed();
    const std::uint64_t lo = block_[avail_ - 2];
    const std::uint64_t hi = block_[avail_ - 1];
    avail_ -= 2;
    return (hi << 32) | lo;
  }

  // Uniform in the open interval (0, 1).
  double next_open_double() {
    const std::uint64_t u = next_u64();
    return (static_cast<double>(u >> 11) + 0.5) * (1.0 / 9007199254740992.0);
  }

  // Pair of independent standard real Gaussians (Box-Muller).
  std::pair<double, double> next_gaussian_pair();

  // One CN(0,1) draw: independent real/imag parts, variance 1/2 each.
  cplx next_cn();

  void fill_cn(CVector& out, std::size_t n);
  CVector sample_cn(std::size_t n) {
    CVector v;
    fill_cn(v, n);
    return v;
  }

 private:
  void refill_if_needed() {
    if (avail_ < 2) {
      block_ = philox_block();
      avail_ = 4;
      ++counter_;
    }
  }

  std::array<std::uint64_t, 4> philox_block() const;

  std::uint32_t key0_, key1_, id_lo_, id_hi_;
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 4> block_{};
  int avail_ = 0;
};

// Stream-id derivation: one stream per (frame, purpose, attempt). Purposes
// keep channel, noise, symbol and calibration draws independent of each other.
namespace stream_purpose {
inline constexpr std::uint64_t kTxBits = 0x01;
inline constexpr std::uint64_t kLemmaG = 0x02;
inline constexpr std::uint64_t kLemmaProbe = 0x03;
inline constexpr std::uint64_t kHopChannel = 0x10;   // + hop index
inline constexpr std::uint64_t kRxNoise = 0x30;      // + receive stage (1..N)
inline constexpr std::uint64_t kCalibration = 0x50;  // + hop index
inline constexpr std::uint64_t kOutage = 0x60;       // + hop index
}  // namespace stream_purpose

inline std::uint64_t make_stream_id(std::uint64_t frame_id, std::uint64_t purpose,
                                    std::uint64_t attempt = 0) {
  return (frame_id << 12) | ((attempt & 0xF) << 8) | (purpose & 0xFF);
}

}  // namespace costbc
