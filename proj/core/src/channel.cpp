#include "costbc/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace costbc {

ChannelRealization draw_channels(const std::vector<std::size_t>& antennas, std::uint64_t frame_id,
                                 std::uint64_t seed, const FadingModel& fading,
                                 std::uint64_t attempt) {
  if (antennas.size() < 2) throw std::invalid_argument("draw_channels: need at least one hop");
  if (fading.coherence_frames < 1)
    throw std::invalid_argument("draw_channels: coherence must be >= 1 frame");
  const std::uint64_t block = frame_id / fading.coherence_frames;

  ChannelRealization out;
  out.frame_id = frame_id;
  out.hops.reserve(antennas.size() - 1);
  for (std::size_t n = 0; n + 1 < antennas.size(); ++n) {
    RngStream stream(seed, make_stream_id(block, stream_purpose::kHopChannel + n, attempt));
    CMatrix h(antennas[n], antennas[n + 1]);
    for (std::size_t i = 0; i < h.rows(); ++i)
      for (std::size_t j = 0; j < h.cols(); ++j) h(i, j) = stream.next_cn();
    out.hops.push_back(std::move(h));
  }
  return out;
}

CVector add_noise(const CVector& signal, double variance, RngStream& stream) {
  if (variance < 0.0) throw std::invalid_argument("add_noise: negative variance");
  CVector out(signal);
  if (variance == 0.0) return out;
  const double sd = std::sqrt(variance);
  for (cplx& v : out) v += sd * stream.next_cn();
  return out;
}

}  // namespace costbc
