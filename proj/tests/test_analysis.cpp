#include "costbc/analysis.hpp"

#include <cmath>
#include <vector>

#include "test_util.hpp"

using namespace costbc;

int main() {
  // --- slope fit on exact power laws ---
  {
    BerCurve curve;
    for (double db : {10.0, 15.0, 20.0, 25.0, 30.0}) {
      BerPoint p;
      p.e_db = db;
      p.ber = 0.37 * std::pow(10.0, -2.0 * db / 10.0);
      p.bit_errors = 100000;
      p.frames = 1;
      curve.points.push_back(p);
    }
    const SlopeFit fit = fit_diversity(curve, 10.0, 30.0);
    CHECK_NEAR(fit.slope, 2.0, 1e-9);
    CHECK(fit.points_used == 5);
    CHECK_NEAR(fit.r_squared, 1.0, 1e-12);
  }
  {
    BerCurve curve;
    for (double db : {10.0, 14.0, 18.0, 22.0}) {
      BerPoint p;
      p.e_db = db;
      p.ber = 1.9 * std::pow(10.0, -4.0 * db / 10.0);
      p.bit_errors = 5000;
      p.frames = 1;
      curve.points.push_back(p);
    }
    CHECK_NEAR(fit_diversity(curve, 10.0, 22.0).slope, 4.0, 1e-9);
    // statistical gate: under-resolved points never enter a fit
    curve.points[3].bit_errors = 99;
    const SlopeFit gated = fit_diversity(curve, 10.0, 22.0);
    CHECK(gated.points_used == 3);
    curve.points[2].bit_errors = 12;
    CHECK_THROWS(fit_diversity(curve, 10.0, 22.0));  // fewer than 3 valid points
  }

  // --- noiseless BER sweep is exactly zero ---
  {
    BerSweepOptions opts;
    opts.seed = 2;
    opts.min_errors = 10;
    opts.max_frames = 200;
    opts.noiseless = true;
    const BerCurve curve = ber_sweep(Scenario{"2hop_2x2x1", {}}, {10.0, 20.0}, opts);
    for (const BerPoint& p : curve.points) {
      CHECK(p.bit_errors == 0);
      CHECK(p.ber == 0.0);
      CHECK(p.frames == 200);
    }
  }

  // --- BER determinism across worker counts, and monotonicity ---
  {
    BerSweepOptions opts;
    opts.seed = 7;
    opts.min_errors = 400;
    opts.max_frames = 300000;
    opts.workers = 1;
    const std::vector<double> levels = {15.0, 20.0, 25.0};
    const BerCurve w1 = ber_sweep(Scenario{"2hop_2x2x1", {}}, levels, opts);
    opts.workers = 8;
    const BerCurve w8 = ber_sweep(Scenario{"2hop_2x2x1", {}}, levels, opts);
    for (std::size_t i = 0; i < levels.size(); ++i) {
      CHECK(w1.points[i].bit_errors == w8.points[i].bit_errors);
      CHECK(w1.points[i].frames == w8.points[i].frames);
    }
    CHECK(w1.points[0].ber > w1.points[1].ber);
    CHECK(w1.points[1].ber > w1.points[2].ber);
    // confidence interval brackets the estimate
    CHECK(w1.points[0].ci_lo < w1.points[0].ber && w1.points[0].ber < w1.points[0].ci_hi);
  }

  // --- outage estimator ---
  {
    OutageOptions opts;
    opts.seed = 3;
    opts.trials = 30000;
    // SNR -> 0: threshold blows up, outage probability -> 1
    const OutageCurve low = outage_sweep({2, 2, 1}, {-30.0}, 0.0, opts);
    CHECK(low.points[0].p_out > 0.999);
    CHECK_THROWS(outage_sweep({2, 2, 1}, {10.0}, 1.0, opts));
    CHECK_THROWS(outage_sweep({2, 2, 1}, {10.0}, -0.1, opts));

    // determinism across worker counts
    opts.trials = 200000;
    opts.workers = 1;
    const OutageCurve o1 = outage_sweep({2, 2, 1}, {15.0, 18.0}, 0.0, opts);
    opts.workers = 5;
    const OutageCurve o5 = outage_sweep({2, 2, 1}, {15.0, 18.0}, 0.0, opts);
    CHECK(o1.points[0].outages == o5.points[0].outages);
    CHECK(o1.points[1].outages == o5.points[1].outages);
  }

  // r = 0.5 halves the (2,2,1) outage slope: d_out(r) = min{M0M1, M1M2}(1-r)
  {
    OutageOptions opts;
    opts.seed = 5;
    opts.trials = 2000000;
    const std::vector<double> snrs = {15.0, 18.0, 21.0, 24.0, 27.0, 30.0};
    const OutageCurve curve = outage_sweep({2, 2, 1}, snrs, 0.5, opts);
    const SlopeFit fit = fit_outage(curve, 15.0, 30.0);
    CHECK_NEAR(fit.slope, 1.0, 0.25);
  }

  // --- noise-covariance eigenvalue bound ---
  {
    // zero matrix: equality
    const CMatrix rw = CMatrix::identity(2);
    CHECK_NEAR(max_eigenvalue_hermitian(rw), 1.0, 1e-15);

    // tight case: probing with the top eigenvector gives equality
    RngStream s(61, 1);
    CMatrix g(2, 2);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) g(i, j) = s.next_cn();
    const double e1 = 2.0, gamma = 10.0;
    const CMatrix ghg = matmul(conj_transpose(g), g);
    const auto [lam, v] = max_eigenpair_hermitian(scale(ghg, 0.5));
    const double bound = 1.0 + e1 * 4.0 / gamma * lam;
    cplx quad{0.0, 0.0};
    double vnorm = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
      vnorm += std::norm(v[i]);
      for (std::size_t j = 0; j < 2; ++j) quad += std::conj(v[i]) * ghg(i, j) * v[j];
    }
    const double lhs = vnorm + e1 * 2.0 / gamma * quad.real();
    CHECK_NEAR(lhs, bound * vnorm, 1e-10 * bound);

    // random probes never violate the bound
    for (const auto& [m1, m2] : std::vector<std::pair<std::size_t, std::size_t>>{{2, 1}, {2, 2}}) {
      const Lemma1Report rep = lemma1_check(m1, m2, 2.0, 10.0, 10000, 67);
      CHECK(rep.violations == 0);
      CHECK(rep.max_rel_violation <= 1e-12);
      CHECK(rep.trials == 10000);
    }
  }

  // --- whiteness report: deterministic and within statistical gates ---
  {
    const NetworkConfig cfg = make_preset("2hop_2x2x1", 100.0);
    const WhitenessReport r1 = whiteness_report(cfg, 30000, 71);
    const WhitenessReport r2 = whiteness_report(cfg, 30000, 71);
    CHECK(r1.max_offdiag_z == r2.max_offdiag_z);  // bit-identical rerun
    CHECK(r1.locations.size() == 3);              // stage-1 relay, dest antenna, combined
    for (const LocationCov& loc : r1.locations) {
      CHECK(loc.max_offdiag_z <= 4.0);
      if (loc.name != "dest_combined") CHECK(loc.max_diag_dev_z <= 4.0);
    }
  }

  // parallel_sum: plain integer reduction, any worker count
  {
    const auto square = [](std::uint64_t i) { return i * i; };
    CHECK(parallel_sum(1, 100, 1, square) == parallel_sum(1, 100, 7, square));
    CHECK(parallel_sum(0, 5, 3, square) == 0 + 1 + 4 + 9 + 16);
  }

  return testutil::summary("analysis");
}
