#pragma once

#include <cstdint>
#include <vector>

#include "costbc/cmatrix.hpp"
#include "costbc/rng.hpp"

namespace costbc {

// Channel constant for `coherence_frames` consecutive frames, independent
// across coherence blocks.
struct FadingModel {
  std::uint64_t coherence_frames = 1;
};

// One block-fading draw of the whole directed cascade: hops[n] is M_n x M_{n+1}
// with i.i.d. CN(0,1) entries; column k is the channel into node k of stage n+1.
struct ChannelRealization {
  std::vector<CMatrix> hops;
  std::uint64_t frame_id = 0;
};

ChannelRealization draw_channels(const std::vector<std::size_t>& antennas, std::uint64_t frame_id,
                                 std::uint64_t seed, const FadingModel& fading = {},
                                 std::uint64_t attempt = 0);

// signal + CN(0, variance) per entry.
CVector add_noise(const CVector& signal, double variance, RngStream& stream);

}  // namespace costbc
