#include "costbc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace costbc {

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

std::uint64_t parallel_sum(std::uint64_t first, std::uint64_t count, unsigned workers,
                           const std::function<std::uint64_t(std::uint64_t)>& fn) {
  workers = resolve_workers(workers);
  if (workers == 1 || count < 2 * workers) {
    std::uint64_t total = 0;
    for (std::uint64_t i = 0; i < count; ++i) total += fn(first + i);
    return total;
  }
  std::vector<std::uint64_t> partial(workers, 0);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      std::uint64_t acc = 0;
      for (std::uint64_t i = w; i < count; i += workers) acc += fn(first + i);
      partial[w] = acc;
    });
  }
  for (std::thread& t : pool) t.join();
  std::uint64_t total = 0;
  for (std::uint64_t p : partial) total += p;
  return total;
}

namespace {

constexpr std::uint64_t kBatch = 8192;

void finish_point(BerPoint& pt, std::uint64_t bits_per_frame) {
  const double nbits = static_cast<double>(pt.frames) * static_cast<double>(bits_per_frame);
  pt.ber = nbits > 0.0 ? static_cast<double>(pt.bit_errors) / nbits : 0.0;
  const double half = 1.959963984540054 * std::sqrt(std::max(pt.ber * (1.0 - pt.ber), 0.0) / std::max(nbits, 1.0));
  pt.ci_lo = std::max(0.0, pt.ber - half);
  pt.ci_hi = std::min(1.0, pt.ber + half);
}

}  // namespace

BerCurve ber_sweep(const Scenario& scenario, const std::vector<double>& e_db_list,
                   const BerSweepOptions& opts) {
  const unsigned workers = resolve_workers(opts.workers);
  BerCurve curve;
  curve.seed = opts.seed;
  curve.workers = workers;
  curve.min_errors = opts.min_errors;
  curve.max_frames = opts.max_frames;
  curve.preset = scenario.preset;
  curve.allocation = scenario.policy.describe();

  std::vector<double> levels(e_db_list);
  std::sort(levels.begin(), levels.end());

  for (double e_db : levels) {
    const NetworkConfig config = scenario.config_at_db(e_db);
    const StageConstants consts = calibrate(config, opts.seed);
    const std::uint64_t bits_per_frame = config.bits_per_frame();
    const RunOptions run_opts{opts.noiseless};

    const auto frame_errors = [&](std::uint64_t frame_id) -> std::uint64_t {
      const FrameTrace trace = run_frame_resampled(config, consts, frame_id, opts.seed, run_opts);
      const SymbolDecision dec = per_symbol_detect(trace, config.constellation, opts.combiner);
      std::uint64_t errs = 0;
      for (std::size_t b = 0; b < trace.tx_bits.size(); ++b)
        errs += static_cast<std::uint64_t>(trace.tx_bits[b] != dec.bits[b]);
      return errs;
    };

    BerPoint pt;
    pt.e_db = e_db;
    while (pt.frames < opts.max_frames && pt.bit_errors < opts.min_errors) {
      const std::uint64_t batch = std::min<std::uint64_t>(kBatch, opts.max_frames - pt.frames);
      pt.bit_errors += parallel_sum(pt.frames, batch, workers, frame_errors);
      pt.frames += batch;
    }
    finish_point(pt, bits_per_frame);
    curve.points.push_back(pt);
  }
  return curve;
}

SlopeFit fit_loglog(const std::vector<std::pair<double, double>>& db_and_prob,
                    const std::vector<std::uint64_t>& events, double lo_db, double hi_db,
                    std::uint64_t min_events) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < db_and_prob.size(); ++i) {
    const auto [db, p] = db_and_prob[i];
    if (db < lo_db - 1e-9 || db > hi_db + 1e-9) continue;
    if (events[i] < min_events || p <= 0.0) continue;
    xs.push_back(db / 10.0);  // log10 of linear power
    ys.push_back(std::log10(p));
  }
  if (xs.size() < 3) throw std::invalid_argument("fit: fewer than 3 valid points in range");

  const std::size_t n = xs.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  SlopeFit fit;
  const double b = sxy / sxx;
  fit.slope = -b;
  fit.intercept = my - b * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  fit.points_used = n;
  fit.range_lo_db = lo_db;
  fit.range_hi_db = hi_db;
  return fit;
}

SlopeFit fit_diversity(const BerCurve& curve, double lo_db, double hi_db,
                       std::uint64_t min_errors) {
  std::vector<std::pair<double, double>> pts;
  std::vector<std::uint64_t> events;
  for (const BerPoint& p : curve.points) {
    pts.emplace_back(p.e_db, p.ber);
    events.push_back(p.bit_errors);
  }
  return fit_loglog(pts, events, lo_db, hi_db, min_errors);
}

OutageCurve outage_sweep(const std::vector<std::size_t>& antennas,
                         const std::vector<double>& snr_db_list, double r,
                         const OutageOptions& opts) {
  if (r < 0.0 || r >= 1.0) throw std::invalid_argument("outage_sweep: need 0 <= r < 1");
  if (antennas.size() < 3) throw std::invalid_argument("outage_sweep: need at least 2 hops");
  const unsigned workers = resolve_workers(opts.workers);

  double mean_q = 1.0;
  for (std::size_t m : antennas) mean_q *= static_cast<double>(m);

  OutageCurve curve;
  curve.seed = opts.seed;
  curve.workers = workers;
  curve.r = r;

  const std::size_t hops = antennas.size() - 1;
  const auto draw_q = [&](std::uint64_t trial) -> double {
    // level gains: a_k at stage-1 relays, cascaded sums up to the destination
    std::vector<double> level(antennas[1]);
    {
      RngStream s(opts.seed, make_stream_id(trial, stream_purpose::kOutage + 0));
      for (std::size_t k = 0; k < antennas[1]; ++k) {
        double acc = 0.0;
        for (std::size_t m = 0; m < antennas[0]; ++m) acc += std::norm(s.next_cn());
        level[k] = acc;
      }
    }
    for (std::size_t hop = 1; hop < hops; ++hop) {
      RngStream s(opts.seed, make_stream_id(trial, stream_purpose::kOutage + hop));
      std::vector<double> next(antennas[hop + 1], 0.0);
      // draw column-by-column to match the hop-matrix layout
      for (std::size_t i = 0; i < antennas[hop + 1]; ++i)
        for (std::size_t k = 0; k < antennas[hop]; ++k)
          next[i] += std::norm(s.next_cn()) * level[k];
      level = std::move(next);
    }
    double q = 0.0;
    for (double v : level) q += v;
    return q;
  };

  for (double snr_db : snr_db_list) {
    const double snr = std::pow(10.0, snr_db / 10.0);
    const double threshold = std::pow(snr, -(1.0 - r));
    OutagePoint pt;
    pt.snr_db = snr_db;
    const auto outage_at = [&](std::uint64_t trial) -> std::uint64_t {
      return draw_q(trial) / mean_q <= threshold ? 1u : 0u;
    };
    while (pt.trials < opts.trials) {
      if (opts.min_events > 0 && pt.outages >= opts.min_events) break;
      const std::uint64_t batch = std::min<std::uint64_t>(kBatch * 8, opts.trials - pt.trials);
      pt.outages += parallel_sum(pt.trials, batch, workers, outage_at);
      pt.trials += batch;
    }
    pt.p_out = static_cast<double>(pt.outages) / static_cast<double>(pt.trials);
    curve.points.push_back(pt);
  }
  return curve;
}

SlopeFit fit_outage(const OutageCurve& curve, double lo_db, double hi_db,
                    std::uint64_t min_events) {
  std::vector<std::pair<double, double>> pts;
  std::vector<std::uint64_t> events;
  for (const OutagePoint& p : curve.points) {
    pts.emplace_back(p.snr_db, p.p_out);
    events.push_back(p.outages);
  }
  return fit_loglog(pts, events, lo_db, hi_db, min_events);
}

Lemma1Report lemma1_check(std::size_t m1, std::size_t m2, double e1, double gamma,
                          std::uint64_t trials, std::uint64_t seed) {
  Lemma1Report rep;
  rep.trials = trials;
  const double md = static_cast<double>(m1);
  for (std::uint64_t t = 0; t < trials; ++t) {
    RngStream gs(seed, make_stream_id(t, stream_purpose::kLemmaG));
    RngStream xs(seed, make_stream_id(t, stream_purpose::kLemmaProbe));
    CMatrix g(m1, m2);
    for (std::size_t i = 0; i < m1; ++i)
      for (std::size_t j = 0; j < m2; ++j) g(i, j) = gs.next_cn();
    const CMatrix ghg = matmul(conj_transpose(g), g);
    const double lam = max_eigenvalue_hermitian(scale(ghg, 1.0 / md));
    const double bound = 1.0 + e1 * md * md / gamma * lam;

    const CVector x = xs.sample_cn(m2);
    // x R_W x* with R_W = I + (e1 m1 / gamma) G*G
    double xnorm = 0.0;
    cplx quad{0.0, 0.0};
    for (std::size_t i = 0; i < m2; ++i) {
      xnorm += std::norm(x[i]);
      for (std::size_t j = 0; j < m2; ++j) quad += x[i] * ghg(i, j) * std::conj(x[j]);
    }
    const double lhs = xnorm + e1 * md / gamma * quad.real();
    const double rel = (lhs - bound * xnorm) / (bound * xnorm);
    rep.max_rel_violation = std::max(rep.max_rel_violation, rel);
    if (rel > 1e-12) ++rep.violations;
  }
  return rep;
}

namespace {

struct CovAccumulator {
  std::string name;
  std::size_t dim = 0;
  std::vector<cplx> herm;    // sum v_l conj(v_j)
  std::vector<cplx> pseudo;  // sum v_l v_j
  std::uint64_t count = 0;

  void init(const std::string& n, std::size_t d) {
    name = n;
    dim = d;
    herm.assign(d * d, cplx{});
    pseudo.assign(d * d, cplx{});
  }
  void add(const CVector& v) {
    for (std::size_t l = 0; l < dim; ++l)
      for (std::size_t j = 0; j < dim; ++j) {
        herm[l * dim + j] += v[l] * std::conj(v[j]);
        pseudo[l * dim + j] += v[l] * v[j];
      }
    ++count;
  }
  LocationCov finish() const {
    LocationCov loc;
    loc.name = name;
    loc.dim = dim;
    loc.trials = count;
    loc.cov = CMatrix(dim, dim);
    loc.pseudo = CMatrix(dim, dim);
    const double n = static_cast<double>(count);
    for (std::size_t l = 0; l < dim; ++l)
      for (std::size_t j = 0; j < dim; ++j) {
        loc.cov(l, j) = herm[l * dim + j] / n;
        loc.pseudo(l, j) = pseudo[l * dim + j] / n;
      }
    // z-scores: off-diagonals of both covariances (Re and Im separately,
    // standard error 1/sqrt(2n) for unit-variance entries), diagonal of the
    // Hermitian part against 1 (standard error 1/sqrt(n)).
    for (std::size_t l = 0; l < dim; ++l)
      for (std::size_t j = 0; j < dim; ++j) {
        const double scale = std::sqrt(loc.cov(l, l).real() * loc.cov(j, j).real());
        if (l != j) {
          const double z1 = std::max(std::abs(loc.cov(l, j).real()), std::abs(loc.cov(l, j).imag()));
          loc.max_offdiag_z = std::max(loc.max_offdiag_z, z1 * std::sqrt(2.0 * n) / scale);
        }
        // pseudo-covariance of a proper noise vector vanishes everywhere
        const double z2 = std::max(std::abs(loc.pseudo(l, j).real()), std::abs(loc.pseudo(l, j).imag()));
        loc.max_offdiag_z = std::max(loc.max_offdiag_z, z2 * std::sqrt(2.0 * n) / scale);
      }
    for (std::size_t l = 0; l < dim; ++l)
      loc.max_diag_dev_z = std::max(loc.max_diag_dev_z,
                                    std::abs(loc.cov(l, l).real() - 1.0) * std::sqrt(n));
    return loc;
  }
};

}  // namespace

WhitenessReport whiteness_report(const NetworkConfig& config, std::uint64_t trials,
                                 std::uint64_t seed) {
  const StageConstants consts = calibrate(config, seed);
  const std::size_t n = config.hops();
  const std::size_t chunk = config.schedule.chunk;
  const CVector zeros(chunk, cplx{0.0, 0.0});

  std::vector<CovAccumulator> acc;
  for (std::size_t stage = 1; stage < n; ++stage) {
    CovAccumulator a;
    a.init("stage" + std::to_string(stage) + "_relay0", chunk);
    acc.push_back(std::move(a));
  }
  for (std::size_t j = 0; j < config.antennas[n]; ++j) {
    CovAccumulator a;
    a.init("dest_antenna" + std::to_string(j), chunk);
    acc.push_back(std::move(a));
  }
  CovAccumulator combined;
  combined.init("dest_combined", chunk);

  for (std::uint64_t t = 0; t < trials; ++t) {
    const ChannelRealization real = draw_channels(config.antennas, t, seed, config.fading);
    FrameTrace trace;
    try {
      trace = run_frame_with_symbols(config, consts, real, seed, zeros);
    } catch (const DegenerateChannel&) {
      continue;
    }
    std::size_t idx = 0;
    for (std::size_t stage = 1; stage < n; ++stage) acc[idx++].add(trace.stage_rx[stage - 1][0].values);
    const std::vector<NodeObservation>& dest = trace.stage_rx.back();
    for (std::size_t j = 0; j < dest.size(); ++j) acc[idx++].add(dest[j].values);

    CVector comb(chunk, cplx{});
    double wnorm = 0.0;
    for (const NodeObservation& obs : dest) {
      const double w = std::sqrt(obs.channel_energy) * std::sqrt(obs.assumed_noise_var);
      wnorm += w * w;
      for (std::size_t l = 0; l < chunk; ++l) comb[l] += w * obs.values[l];
    }
    for (cplx& v : comb) v /= std::sqrt(wnorm);
    combined.add(comb);
  }

  WhitenessReport rep;
  rep.trials = trials;
  for (const CovAccumulator& a : acc) rep.locations.push_back(a.finish());
  rep.locations.push_back(combined.finish());
  for (const LocationCov& loc : rep.locations)
    rep.max_offdiag_z = std::max(rep.max_offdiag_z, loc.max_offdiag_z);
  return rep;
}

}  // namespace costbc
