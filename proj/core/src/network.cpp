#include "costbc/network.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace costbc {

Allocation equal_allocation(double e_total, const std::vector<std::size_t>& antennas) {
  if (e_total <= 0.0) throw std::invalid_argument("equal_allocation: total power must be > 0");
  const std::size_t n = antennas.size() - 1;
  Allocation a;
  a.source_power = e_total / static_cast<double>(n);
  for (std::size_t stage = 1; stage < n; ++stage)
    a.relay_power.push_back(e_total / (static_cast<double>(n) * antennas[stage]));
  return a;
}

Allocation custom_allocation(double e_total, const std::vector<double>& fractions,
                             const std::vector<std::size_t>& antennas) {
  const std::size_t n = antennas.size() - 1;
  if (fractions.size() != n)
    throw std::invalid_argument("custom_allocation: need one fraction per transmitting stage");
  double mass = fractions[0];
  for (std::size_t stage = 1; stage < n; ++stage) mass += antennas[stage] * fractions[stage];
  if (std::abs(mass - 1.0) > 1e-9)
    throw std::invalid_argument(
        "custom_allocation: fractions violate the constraint E_0 + sum M_n E_n = E");
  for (double f : fractions)
    if (f <= 0.0)
      throw std::invalid_argument("custom_allocation: every stage needs positive power");
  Allocation a;
  a.source_power = fractions[0] * e_total;
  for (std::size_t stage = 1; stage < n; ++stage) a.relay_power.push_back(fractions[stage] * e_total);
  return a;
}

std::string AllocationPolicy::describe() const {
  if (kind == Kind::Equal) return "equal";
  std::ostringstream os;
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    if (i) os << ',';
    os << fractions[i];
  }
  return os.str();
}

BlockSchedule build_schedule(std::size_t src_l, std::size_t relay_l) {
  BlockSchedule s;
  s.chunk = std::lcm(src_l, relay_l);
  s.src_blocks = s.chunk / src_l;
  s.relay_blocks = s.chunk / relay_l;
  s.assignment.resize(s.relay_blocks);
  for (std::size_t b = 0; b < s.relay_blocks; ++b)
    for (std::size_t i = 0; i < relay_l; ++i) s.assignment[b].push_back(b * relay_l + i);
  return s;
}

void NetworkConfig::validate() const {
  if (antennas.size() < 2) throw std::invalid_argument("antennas: need M_0..M_N with N >= 1");
  for (std::size_t m : antennas)
    if (m == 0) throw std::invalid_argument("antennas: counts must be >= 1");
  const std::size_t n = hops();
  if (source_design.K != antennas[0])
    throw std::invalid_argument("source_design: K does not match M_0");
  if (relay_sets.size() != n - 1)
    throw std::invalid_argument("relay_sets: need one dispersion set per relay stage");
  for (std::size_t stage = 1; stage < n; ++stage) {
    const DispersionSet& set = relay_sets[stage - 1];
    if (set.relay_count != antennas[stage])
      throw std::invalid_argument("relay_sets: relay count does not match M_n");
    if (schedule.chunk % set.L != 0)
      throw std::invalid_argument("relay_sets: schedule chunk not divisible by dispersion L");
    if (stage >= 2 && relay_sets[stage - 2].outgoing.L != set.L)
      throw std::invalid_argument("relay_sets: incoming design L does not match dispersion L");
  }
  const BlockSchedule expect = build_schedule(source_design.L, relay_sets[0].L);
  if (schedule.chunk != expect.chunk || schedule.src_blocks != expect.src_blocks ||
      schedule.relay_blocks != expect.relay_blocks)
    throw std::invalid_argument("schedule: inconsistent with design rates");
  if (allocation.relay_power.size() != n - 1)
    throw std::invalid_argument("allocation: need a power per relay stage");
  double mass = allocation.source_power;
  for (std::size_t stage = 1; stage < n; ++stage)
    mass += antennas[stage] * allocation.relay_power[stage - 1];
  if (std::abs(mass - total_power) > 1e-9 * std::max(1.0, total_power))
    throw std::invalid_argument("allocation: E_0 + sum M_n E_n != E");
  if (allocation.source_power <= 0.0)
    throw std::invalid_argument("allocation: source power must be > 0");
  for (double p : allocation.relay_power)
    if (p <= 0.0) throw std::invalid_argument("allocation: relay power must be > 0");
  double energy = 0.0;
  for (const cplx& p : constellation.points) energy += std::norm(p);
  if (std::abs(energy / constellation.points.size() - 1.0) > 1e-12)
    throw std::invalid_argument("constellation: average energy != 1");
}

std::size_t diversity_upper_bound(const NetworkConfig& config) {
  std::size_t best = SIZE_MAX;
  for (std::size_t hop = 0; hop < config.hops(); ++hop)
    best = std::min(best, config.antennas[hop] * config.antennas[hop + 1]);
  return best;
}

namespace {

std::vector<std::size_t> parse_preset_antennas(const std::string& name) {
  const auto hop_pos = name.find("hop_");
  if (hop_pos == std::string::npos || hop_pos == 0)
    throw std::invalid_argument("unknown preset: " + name);
  const std::size_t hops = std::stoul(name.substr(0, hop_pos));
  std::vector<std::size_t> antennas;
  std::stringstream rest(name.substr(hop_pos + 4));
  std::string tok;
  while (std::getline(rest, tok, 'x')) antennas.push_back(std::stoul(tok));
  if (antennas.size() != hops + 1)
    throw std::invalid_argument("preset " + name + ": antenna list does not match hop count");
  return antennas;
}

}  // namespace

NetworkConfig make_preset(const std::string& name, double e_total,
                          const AllocationPolicy& policy) {
  const std::vector<std::size_t> antennas = parse_preset_antennas(name);
  const std::size_t n = antennas.size() - 1;

  NetworkConfig cfg;
  cfg.preset = name;
  cfg.antennas = antennas;
  cfg.constellation = qam4();
  cfg.total_power = e_total;

  bool relay_chain_of_two = true;
  for (std::size_t stage = 1; stage < n; ++stage) relay_chain_of_two &= antennas[stage] == 2;

  if (antennas[0] == 2 && relay_chain_of_two) {
    cfg.source_design = alamouti_design();
    for (std::size_t stage = 1; stage < n; ++stage) cfg.relay_sets.push_back(alamouti_pair());
  } else if (n == 2 && antennas[0] == 4 && antennas[1] == 4) {
    cfg.source_design = rate34_design();
    cfg.relay_sets.push_back(ostbc4_r34_set());
  } else if (n == 2 && antennas[0] == 4 && antennas[1] == 2) {
    cfg.source_design = rate34_design();
    cfg.relay_sets.push_back(mixed_4to2());
  } else {
    throw std::invalid_argument("preset " + name + ": no shipped code for this topology");
  }

  cfg.schedule = build_schedule(cfg.source_design.L, cfg.relay_sets[0].L);
  cfg.allocation = policy.realize(e_total, antennas);
  cfg.validate();
  return cfg;
}

std::vector<std::string> shipped_presets() {
  return {"2hop_2x2x1", "2hop_2x2x2", "2hop_2x2x3", "2hop_4x4x1",    "2hop_4x4x2",
          "2hop_4x4x3", "2hop_4x2x1", "2hop_4x2x2", "3hop_2x2x2x1", "3hop_2x2x2x2"};
}

namespace {

// Separated-symbol gains are channel-only quantities: the per-node recursion
// below never touches noise draws, so calibration runs on channel streams.
std::vector<double> stage_gains(const NetworkConfig& cfg, const StageConstants& consts,
                                const ChannelRealization& real, std::size_t upto_stage) {
  const double e0 = cfg.allocation.source_power;
  std::vector<double> g(cfg.antennas[1]);
  for (std::size_t m = 0; m < g.size(); ++m) {
    double p = 0.0;
    for (std::size_t i = 0; i < cfg.antennas[0]; ++i) p += std::norm(real.hops[0](i, m));
    g[m] = std::sqrt(e0) * cfg.source_design.nu * std::sqrt(p);
  }
  for (std::size_t stage = 1; stage < upto_stage; ++stage) {
    const DispersionSet& set = cfg.relay_sets[stage - 1];
    const double c = consts.amplitude[stage - 1];
    const double l_over_m = static_cast<double>(set.L) / static_cast<double>(set.relay_count);
    const CMatrix& f = real.hops[stage];
    std::vector<double> next(cfg.antennas[stage + 1]);
    for (std::size_t i = 0; i < next.size(); ++i) {
      double fsum = 0.0;
      double esum = 0.0;
      for (std::size_t m = 0; m < g.size(); ++m) {
        const double fn = std::norm(f(m, i));
        fsum += fn;
        esum += g[m] * g[m] * fn;
      }
      const double sigma2 = 1.0 + c * c * l_over_m * fsum;
      next[i] = c * std::sqrt(esum) / std::sqrt(sigma2);
    }
    g = std::move(next);
  }
  return g;
}

}  // namespace

StageConstants calibrate(const NetworkConfig& config, std::uint64_t seed, std::size_t trials) {
  config.validate();
  StageConstants out;
  const std::size_t n = config.hops();
  for (std::size_t stage = 1; stage < n; ++stage) {
    double m2;
    if (stage == 1) {
      m2 = config.allocation.source_power * static_cast<double>(config.antennas[0]) *
           config.source_design.nu * config.source_design.nu;
    } else {
      // calibration Monte Carlo over channel draws of all upstream hops
      double acc = 0.0;
      std::size_t count = 0;
      for (std::size_t t = 0; t < trials; ++t) {
        ChannelRealization real;
        real.frame_id = t;
        for (std::size_t hop = 0; hop < stage; ++hop) {
          RngStream s(seed, make_stream_id(t, stream_purpose::kCalibration + hop));
          CMatrix h(config.antennas[hop], config.antennas[hop + 1]);
          for (std::size_t i = 0; i < h.rows(); ++i)
            for (std::size_t j = 0; j < h.cols(); ++j) h(i, j) = s.next_cn();
          real.hops.push_back(std::move(h));
        }
        const std::vector<double> g = stage_gains(config, out, real, stage);
        for (double v : g) {
          acc += v * v;
          ++count;
        }
      }
      m2 = acc / static_cast<double>(count);
    }
    const DispersionSet& set = config.relay_sets[stage - 1];
    out.gain_m2.push_back(m2);
    out.gamma_sym.push_back(m2 + 1.0);
    out.amplitude.push_back(std::sqrt(config.allocation.relay_power[stage - 1] *
                                      static_cast<double>(set.relay_count) /
                                      (static_cast<double>(set.L) * (m2 + 1.0))));
  }
  return out;
}

double stage_gamma_general(std::size_t stage, const NetworkConfig& config,
                           const StageConstants& consts) {
  if (stage < 1 || stage >= config.hops())
    throw std::invalid_argument("stage_gamma_general: stage out of range");
  const OstbcDesign& incoming =
      stage == 1 ? config.source_design : config.relay_sets[stage - 2].outgoing;
  const double l = static_cast<double>(incoming.L);
  // vector norm in the un-scaled symbol convention: L * (L * m2 + 1)
  return l * (l * consts.gain_m2[stage - 1] + 1.0);
}

FrameTrace run_frame_with_symbols(const NetworkConfig& config, const StageConstants& consts,
                                  const ChannelRealization& realization, std::uint64_t seed,
                                  const CVector& symbols, const RunOptions& opts) {
  const std::size_t n = config.hops();
  const std::size_t chunk = config.schedule.chunk;
  if (symbols.size() != chunk)
    throw std::invalid_argument("run_frame: symbol count does not match schedule chunk");

  FrameTrace trace;
  trace.frame_id = realization.frame_id;
  trace.tx_symbols = symbols;
  trace.stage_rx.resize(n);
  trace.relay_energy.assign(n - 1, 0.0);

  const double e0 = config.allocation.source_power;
  const std::size_t src_l = config.source_design.L;

  // source blocks, shared by every stage-1 relay
  std::vector<CMatrix> src_tx;
  for (std::size_t b = 0; b < config.schedule.src_blocks; ++b) {
    CVector s_block(symbols.begin() + b * src_l, symbols.begin() + (b + 1) * src_l);
    CMatrix x = scale(encode(config.source_design, s_block), std::sqrt(e0));
    for (const cplx& v : x.data()) trace.source_energy += std::norm(v);
    src_tx.push_back(std::move(x));
  }

  // stage-1 reception
  RngStream noise1(seed, make_stream_id(realization.frame_id, stream_purpose::kRxNoise + 1));
  std::vector<CVector> values(config.antennas[1]);
  std::vector<double> gains(config.antennas[1]);
  trace.stage_rx[0].resize(config.antennas[1]);
  for (std::size_t m = 0; m < config.antennas[1]; ++m) {
    const CVector hm = realization.hops[0].col(m);
    double energy = 0.0;
    for (const cplx& h : hm) energy += std::norm(h);
    values[m].resize(chunk);
    for (std::size_t b = 0; b < config.schedule.src_blocks; ++b) {
      CVector y = mul_vec(src_tx[b], hm);
      if (!opts.noiseless)
        for (cplx& v : y) v += noise1.next_cn();
      const SeparatedSymbols sep =
          matched_filter(config.source_design, y, hm, std::sqrt(e0), 1.0);
      for (std::size_t l = 0; l < src_l; ++l) values[m][b * src_l + l] = sep.values[l];
      gains[m] = sep.gain;
    }
    trace.stage_rx[0][m] = NodeObservation{values[m], gains[m], 1.0, energy};
  }

  // relay stages 1..N-1 transmit; receivers are stage n+1 nodes (destination at n+1 == N)
  for (std::size_t stage = 1; stage < n; ++stage) {
    const DispersionSet& set = config.relay_sets[stage - 1];
    const std::size_t m_count = config.antennas[stage];
    const std::size_t blocks = chunk / set.L;
    const double c = consts.amplitude[stage - 1];
    const StagePower power{config.allocation.relay_power[stage - 1],
                           consts.gamma_sym[stage - 1]};

    std::vector<std::vector<CVector>> tx(m_count);
    for (std::size_t m = 0; m < m_count; ++m) {
      tx[m].resize(blocks);
      for (std::size_t b = 0; b < blocks; ++b) {
        SeparatedSymbols sep;
        sep.values.assign(values[m].begin() + b * set.L, values[m].begin() + (b + 1) * set.L);
        sep.gain = gains[m];
        tx[m][b] = relay_transmit(set, m, sep, power);
        for (const cplx& v : tx[m][b]) trace.relay_energy[stage - 1] += std::norm(v);
      }
    }

    const std::size_t next_count = config.antennas[stage + 1];
    const CMatrix& f = realization.hops[stage];
    const bool last_hop = (stage == n - 1);
    if (last_hop) trace.dest_received.assign(blocks, CMatrix(set.relay_count, next_count));

    RngStream noise(seed,
                    make_stream_id(realization.frame_id, stream_purpose::kRxNoise + stage + 1));
    std::vector<CVector> next_values(next_count);
    std::vector<double> next_gains(next_count);
    trace.stage_rx[stage].resize(next_count);
    const double l_over_m = static_cast<double>(set.L) / static_cast<double>(set.relay_count);
    for (std::size_t i = 0; i < next_count; ++i) {
      double fsum = 0.0;
      CVector phi(m_count);
      double energy = 0.0;
      for (std::size_t m = 0; m < m_count; ++m) {
        fsum += std::norm(f(m, i));
        phi[m] = gains[m] * f(m, i);
        energy += std::norm(phi[m]);
      }
      const double sigma2 = 1.0 + c * c * l_over_m * fsum;
      next_values[i].resize(chunk);
      for (std::size_t b = 0; b < blocks; ++b) {
        CVector y(set.relay_count, cplx{0.0, 0.0});
        for (std::size_t m = 0; m < m_count; ++m)
          for (std::size_t t = 0; t < set.relay_count; ++t) y[t] += tx[m][b][t] * f(m, i);
        if (!opts.noiseless)
          for (cplx& v : y) v += noise.next_cn();
        if (last_hop)
          for (std::size_t t = 0; t < set.relay_count; ++t) trace.dest_received[b](t, i) = y[t];
        const SeparatedSymbols sep =
            matched_filter(set.outgoing, y, phi, c / set.outgoing.nu, sigma2);
        for (std::size_t l = 0; l < set.L; ++l) next_values[i][b * set.L + l] = sep.values[l];
        next_gains[i] = sep.gain;
      }
      trace.stage_rx[stage][i] = NodeObservation{next_values[i], next_gains[i], sigma2, energy};
    }
    values = std::move(next_values);
    gains = std::move(next_gains);
    trace.stage_amplitude.push_back(c);
  }
  return trace;
}

FrameTrace run_frame(const NetworkConfig& config, const StageConstants& consts,
                     const ChannelRealization& realization, std::uint64_t seed,
                     const RunOptions& opts) {
  RngStream bit_stream(seed, make_stream_id(realization.frame_id, stream_purpose::kTxBits));
  std::vector<int> bits(config.bits_per_frame());
  for (int& b : bits) b = static_cast<int>(bit_stream.next_u64() & 1u);
  FrameTrace trace = run_frame_with_symbols(config, consts, realization, seed,
                                            bits_to_symbols(bits, config.constellation), opts);
  trace.tx_bits = std::move(bits);
  return trace;
}

FrameTrace run_frame_resampled(const NetworkConfig& config, const StageConstants& consts,
                               std::uint64_t frame_id, std::uint64_t seed,
                               const RunOptions& opts) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    if (attempt > 8) throw DegenerateChannel{};
    const ChannelRealization real =
        draw_channels(config.antennas, frame_id, seed, config.fading, attempt);
    try {
      FrameTrace trace = run_frame(config, consts, real, seed, opts);
      trace.attempt = attempt;
      return trace;
    } catch (const DegenerateChannel&) {
      continue;  // probability-zero event under the continuous fading model
    }
  }
}

}  // namespace costbc
