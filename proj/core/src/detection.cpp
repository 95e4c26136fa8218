#include "costbc/detection.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace costbc {

SymbolDecision per_symbol_detect(const FrameTrace& trace, const Constellation& constellation,
                                 Combiner combiner) {
  const std::vector<NodeObservation>& dest = trace.stage_rx.back();
  const std::size_t chunk = dest[0].values.size();

  // Reconstruct the un-normalized matched-filter output of antenna j by
  // weight w_j = sqrt(channel_energy_j * sigma_j^2), then sum over antennas.
  std::vector<double> w(dest.size());
  for (std::size_t j = 0; j < dest.size(); ++j) {
    w[j] = std::sqrt(dest[j].channel_energy) * std::sqrt(dest[j].assumed_noise_var);
    if (combiner == Combiner::NoiseWeighted) w[j] /= dest[j].assumed_noise_var;
  }
  double combined_gain = 0.0;
  for (std::size_t j = 0; j < dest.size(); ++j) combined_gain += w[j] * dest[j].gain;

  SymbolDecision out;
  out.indices.resize(chunk);
  out.metric_margin = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < chunk; ++l) {
    cplx combined{0.0, 0.0};
    for (std::size_t j = 0; j < dest.size(); ++j) combined += w[j] * dest[j].values[l];
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    double second = best_d;
    for (std::size_t i = 0; i < constellation.size(); ++i) {
      const double d = std::norm(combined - combined_gain * constellation.points[i]);
      if (d < best_d) {
        second = best_d;
        best_d = d;
        best = static_cast<int>(i);
      } else if (d < second) {
        second = d;
      }
    }
    out.indices[l] = best;
    out.metric_margin = std::min(out.metric_margin, second - best_d);
  }
  out.bits = symbols_to_bits(out.indices, constellation);
  return out;
}

namespace {

// Cholesky factorization of a small SPD matrix (row-major, n x n), in place.
void cholesky(std::vector<double>& a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
      if (i == j) {
        if (s <= 0.0) throw std::runtime_error("joint_ml_detect: covariance not positive definite");
        a[i * n + i] = std::sqrt(s);
      } else {
        a[i * n + j] = s / a[j * n + j];
      }
    }
    for (std::size_t j = i + 1; j < n; ++j) a[i * n + j] = 0.0;
  }
}

// x^T Sigma^{-1} x with Sigma = L L^T: forward-solve L y = x, return |y|^2.
double quad_form(const std::vector<double>& chol, std::size_t n, std::vector<double>& x) {
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = x[i];
    for (std::size_t k = 0; k < i; ++k) s -= chol[i * n + k] * x[k];
    x[i] = s / chol[i * n + i];
    q += x[i] * x[i];
  }
  return q;
}

}  // namespace

SymbolDecision joint_ml_detect(const NetworkConfig& config, const StageConstants& consts,
                               const FrameTrace& trace, const ChannelRealization& realization) {
  if (config.hops() != 2)
    throw std::invalid_argument("joint_ml_detect: oracle supports 2-hop networks only");
  const DispersionSet& set = config.relay_sets[0];
  const std::size_t m1 = config.antennas[1];
  const std::size_t m2 = config.antennas[2];
  const Constellation& cst = config.constellation;

  double codebook = 1.0;
  for (std::size_t l = 0; l < config.schedule.chunk; ++l) codebook *= cst.size();
  if (codebook > 4096.0) throw std::invalid_argument("joint_ml_detect: codebook too large");

  const double c = consts.amplitude[0];
  const CMatrix& g = realization.hops[1];

  // effective channel: phi(m, j) = G_m g_mj, G_m the stage-1 separated gain
  CMatrix phi(m1, m2);
  for (std::size_t m = 0; m < m1; ++m)
    for (std::size_t j = 0; j < m2; ++j) phi(m, j) = trace.stage_rx[0][m].gain * g(m, j);

  // Exact covariance of the vectorized destination block w = vec by (t, j):
  // C[(t,j),(t',j')] = c^2 sum_k g_kj g_kj'* P_k(t,t') + I,
  // Pseudo[(t,j),(t',j')] = c^2 sum_k g_kj g_kj' Q_k(t,t'),
  // with P_k = A_k A_k* + B_k B_k*, Q_k = A_k B_k^T + B_k A_k^T.
  const std::size_t nvec = m1 * m2;
  std::vector<CMatrix> pk, qk;
  for (std::size_t k = 0; k < m1; ++k) {
    const CMatrix at = conj_transpose(set.A[k]);
    const CMatrix bt = conj_transpose(set.B[k]);
    pk.push_back(add(matmul(set.A[k], at), matmul(set.B[k], bt)));
    CMatrix abt(m1, m1);
    for (std::size_t t = 0; t < m1; ++t)
      for (std::size_t u = 0; u < m1; ++u) {
        cplx acc{0.0, 0.0};
        for (std::size_t l = 0; l < set.L; ++l)
          acc += set.A[k](t, l) * set.B[k](u, l) + set.B[k](t, l) * set.A[k](u, l);
        abt(t, u) = acc;
      }
    qk.push_back(std::move(abt));
  }
  CMatrix cov(nvec, nvec);
  CMatrix pseudo(nvec, nvec);
  for (std::size_t j = 0; j < m2; ++j)
    for (std::size_t t = 0; t < m1; ++t)
      for (std::size_t j2 = 0; j2 < m2; ++j2)
        for (std::size_t t2 = 0; t2 < m1; ++t2) {
          cplx cc{0.0, 0.0};
          cplx pp{0.0, 0.0};
          for (std::size_t k = 0; k < m1; ++k) {
            cc += g(k, j) * std::conj(g(k, j2)) * pk[k](t, t2);
            pp += g(k, j) * g(k, j2) * qk[k](t, t2);
          }
          const std::size_t row = j * m1 + t;
          const std::size_t col = j2 * m1 + t2;
          cov(row, col) = c * c * cc + ((row == col) ? 1.0 : 0.0);
          pseudo(row, col) = c * c * pp;
        }

  // real composite covariance over [Re w; Im w]
  const std::size_t nr = 2 * nvec;
  std::vector<double> sigma(nr * nr, 0.0);
  for (std::size_t i = 0; i < nvec; ++i)
    for (std::size_t j = 0; j < nvec; ++j) {
      const double re_c = cov(i, j).real(), im_c = cov(i, j).imag();
      const double re_p = pseudo(i, j).real(), im_p = pseudo(i, j).imag();
      sigma[i * nr + j] = 0.5 * (re_c + re_p);                         // E[uu^T]
      sigma[(nvec + i) * nr + (nvec + j)] = 0.5 * (re_c - re_p);       // E[vv^T]
      sigma[i * nr + (nvec + j)] = 0.5 * (im_p - im_c);                // E[uv^T]
      sigma[(nvec + i) * nr + j] = 0.5 * (im_c + im_p);                // E[vu^T]
    }
  cholesky(sigma, nr);

  const std::size_t blocks = config.schedule.relay_blocks;
  const std::size_t block_l = set.L;
  const std::size_t n_points = cst.size();

  // metric is additive over relay blocks, so the joint argmin factors per block
  SymbolDecision out;
  out.indices.assign(config.schedule.chunk, 0);
  out.metric_margin = std::numeric_limits<double>::infinity();
  std::vector<double> x(nr);
  std::vector<std::size_t> word(block_l);
  CVector s_blk(block_l);
  for (std::size_t b = 0; b < blocks; ++b) {
    double best_metric = std::numeric_limits<double>::infinity();
    double second = best_metric;
    std::vector<std::size_t> best_word(block_l, 0);
    std::size_t n_words = 1;
    for (std::size_t l = 0; l < block_l; ++l) n_words *= n_points;
    for (std::size_t wid = 0; wid < n_words; ++wid) {
      std::size_t rem = wid;
      for (std::size_t l = block_l; l-- > 0;) {
        word[l] = rem % n_points;
        rem /= n_points;
      }
      for (std::size_t l = 0; l < block_l; ++l) s_blk[l] = cst.points[word[l]];
      // model: Y(s) = c * D_raw(s) * phi, D_raw = un-scaled stacked design
      const CMatrix model = scale(matmul(encode(set.outgoing, s_blk), phi),
                                  cplx{c / set.outgoing.nu, 0.0});
      for (std::size_t j = 0; j < m2; ++j)
        for (std::size_t t = 0; t < m1; ++t) {
          const cplx r = trace.dest_received[b](t, j) - model(t, j);
          x[j * m1 + t] = r.real();
          x[nvec + j * m1 + t] = r.imag();
        }
      const double metric = quad_form(sigma, nr, x);
      if (metric < best_metric) {
        second = best_metric;
        best_metric = metric;
        best_word = word;
      } else if (metric < second) {
        second = metric;
      }
    }
    for (std::size_t l = 0; l < block_l; ++l)
      out.indices[b * block_l + l] = static_cast<int>(best_word[l]);
    out.metric_margin = std::min(out.metric_margin, second - best_metric);
  }
  out.bits = symbols_to_bits(out.indices, cst);
  return out;
}

}  // namespace costbc
