#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "costbc/detection.hpp"
#include "costbc/network.hpp"

namespace costbc {

// A preset plus an allocation policy; the total power is chosen per sweep point.
struct Scenario {
  std::string preset = "2hop_2x2x1";
  AllocationPolicy policy{};

  NetworkConfig config_at_db(double e_db) const {
    return make_preset(preset, std::pow(10.0, e_db / 10.0), policy);
  }
};

struct BerPoint {
  double e_db = 0.0;
  std::uint64_t frames = 0;
  std::uint64_t bit_errors = 0;
  double ber = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

struct BerCurve {
  std::vector<BerPoint> points;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::uint64_t min_errors = 0;
  std::uint64_t max_frames = 0;
  std::string preset;
  std::string allocation;
};

struct BerSweepOptions {
  std::uint64_t seed = 1;
  unsigned workers = 0;  // 0 = hardware concurrency
  std::uint64_t min_errors = 100;
  std::uint64_t max_frames = 1000000;
  bool noiseless = false;
  Combiner combiner = Combiner::MatchedSum;
};

// Runs frames in fixed deterministic batches until min_errors bit errors are
// collected or max_frames is reached. Error counts are integer sums over
// per-frame results keyed by frame id, so any worker count produces
// bit-identical output.
BerCurve ber_sweep(const Scenario& scenario, const std::vector<double>& e_db_list,
                   const BerSweepOptions& opts);

struct SlopeFit {
  double slope = 0.0;  // negative log10(p)/log10(E) regression coefficient
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points_used = 0;
  double range_lo_db = 0.0;
  double range_hi_db = 0.0;
};

// Least-squares fit of log10(p) against log10(power) over in-range points
// carrying at least min_events events. Throws if fewer than 3 points qualify.
SlopeFit fit_loglog(const std::vector<std::pair<double, double>>& db_and_prob,
                    const std::vector<std::uint64_t>& events, double lo_db, double hi_db,
                    std::uint64_t min_events);

SlopeFit fit_diversity(const BerCurve& curve, double lo_db, double hi_db,
                       std::uint64_t min_errors = 100);

struct OutagePoint {
  double snr_db = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t outages = 0;
  double p_out = 0.0;
};

struct OutageCurve {
  std::vector<OutagePoint> points;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  double r = 0.0;
  std::string preset;
};

struct OutageOptions {
  std::uint64_t seed = 1;
  unsigned workers = 0;
  std::uint64_t trials = 1000000;
  std::uint64_t min_events = 0;  // early-stop once reached (0 = never)
};

// Monte Carlo estimate of the separated-channel outage P(q~ <= SNR^-(1-r))
// with q~ the unit-mean cascaded gain sum_j sum_k |g_kj|^2 (sum_m |h_mk|^2) /
// prod(M_n), over fresh channel draws per trial. 0 <= r < 1.
OutageCurve outage_sweep(const std::vector<std::size_t>& antennas,
                         const std::vector<double>& snr_db_list, double r,
                         const OutageOptions& opts);

SlopeFit fit_outage(const OutageCurve& curve, double lo_db, double hi_db,
                    std::uint64_t min_events = 100);

struct Lemma1Report {
  std::uint64_t trials = 0;
  double max_rel_violation = 0.0;  // max (x R_W x* - bound |x|^2) / (bound |x|^2)
  std::uint64_t violations = 0;    // count beyond 1e-12 relative
};

// Probes x R_W x* <= (1 + (E1 M1^2 / gamma) lambda_max(G*G / M1)) |x|^2 with
// R_W = I + (E1 M1 / gamma) G*G over random (G, x) draws.
Lemma1Report lemma1_check(std::size_t m1, std::size_t m2, double e1, double gamma,
                          std::uint64_t trials, std::uint64_t seed);

struct LocationCov {
  std::string name;
  std::size_t dim = 0;
  std::uint64_t trials = 0;
  CMatrix cov;     // Hermitian sample covariance E[v v*]
  CMatrix pseudo;  // sample pseudo-covariance E[v v]
  double max_offdiag_z = 0.0;  // normalized, over Re/Im of both covariances
  double max_diag_dev_z = 0.0; // (C_ll - 1) in standard errors
};

struct WhitenessReport {
  std::vector<LocationCov> locations;
  double max_offdiag_z = 0.0;
  std::uint64_t trials = 0;
};

// Empirical covariance of the separated noise (all-zero symbol frames) at the
// first relay of every stage, at each destination antenna, and at the
// antenna-combined destination output. Single-threaded and seed-deterministic.
WhitenessReport whiteness_report(const NetworkConfig& config, std::uint64_t trials,
                                 std::uint64_t seed);

// Deterministic parallel integer reduction over frame ids [first, first+count):
// worker w handles frames first+w, first+w+workers, ... and the partial sums
// are added in worker order.
std::uint64_t parallel_sum(std::uint64_t first, std::uint64_t count, unsigned workers,
                           const std::function<std::uint64_t(std::uint64_t)>& fn);

unsigned resolve_workers(unsigned requested);

}  // namespace costbc
