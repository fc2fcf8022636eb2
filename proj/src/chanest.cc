// rfdna/chanest.cc

// Copyright 2026  The rfdna Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "rfdna/chanest.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>

#include "rfdna/fft.h"
#include "rfdna/signal_model.h"

namespace rfdna {

std::string to_string(EstimatorKind k) {
  switch (k) {
    case EstimatorKind::kLs: return "LS";
    case EstimatorKind::kLmmse: return "MMSE";
    case EstimatorKind::kNm: return "NM";
  }
  return "?";
}

EstimatorKind parse_estimator(const std::string &s) {
  if (s == "ls" || s == "LS") return EstimatorKind::kLs;
  if (s == "mmse" || s == "lmmse" || s == "MMSE" || s == "LMMSE") return EstimatorKind::kLmmse;
  if (s == "nm" || s == "NM") return EstimatorKind::kNm;
  throw std::invalid_argument("unknown estimator '" + s + "'");
}

void ChannelEstimate::validate() const {
  if (taps.size() != delays.size())
    throw std::invalid_argument("ChannelEstimate: taps/delays length mismatch");
  if (!all_finite(taps)) throw NonFiniteError("ChannelEstimate: non-finite tap");
  if (!(residual_power >= 0.0))
    throw std::invalid_argument("ChannelEstimate: negative residual power");
}

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

std::vector<std::size_t> occupied_bins(const std::vector<cd> &X) {
  std::vector<std::size_t> bins;
  for (std::size_t k = 0; k < X.size(); ++k)
    if (X[k] != cd(0.0, 0.0)) bins.push_back(k);
  return bins;
}

// F(i, l) = exp(-j 2 pi bins[i] delays[l] / n)
MatrixXcd delay_basis(const std::vector<std::size_t> &bins, const std::vector<int> &delays,
                      std::size_t n) {
  MatrixXcd F(bins.size(), delays.size());
  for (std::size_t i = 0; i < bins.size(); ++i)
    for (std::size_t l = 0; l < delays.size(); ++l) {
      const double ang = -2.0 * kPi * static_cast<double>(bins[i]) * delays[l] /
                         static_cast<double>(n);
      F(i, l) = std::polar(1.0, ang);
    }
  return F;
}

// P = (F^H F)^-1 F^H
MatrixXcd tap_projector(const MatrixXcd &F) {
  if (F.cols() > F.rows())
    throw std::invalid_argument("chanest: more taps than occupied bins");
  const MatrixXcd FhF = F.adjoint() * F;
  Eigen::LDLT<MatrixXcd> ldlt(FhF);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    throw std::invalid_argument("chanest: delay hypothesis is rank deficient");
  return ldlt.solve(F.adjoint());
}

double bin_residual(const std::vector<cd> &H, const std::vector<std::size_t> &bins,
                    const MatrixXcd &F, const VectorXcd &h) {
  const VectorXcd fit = F * h;
  double acc = 0.0;
  for (std::size_t i = 0; i < bins.size(); ++i) acc += std::norm(H[bins[i]] - fit(i));
  return acc / static_cast<double>(bins.size());
}

ChannelEstimate ls_from_response(std::vector<cd> H, const std::vector<cd> &X,
                                 const std::vector<int> &delays, std::size_t n_lts) {
  ChannelEstimate est;
  est.method = EstimatorKind::kLs;
  est.n_lts = n_lts;
  if (delays.empty()) {
    const auto h = idft(H);
    est.taps = h;
    est.delays.resize(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) est.delays[i] = static_cast<int>(i);
    est.freq_response = std::move(H);
    est.validate();
    return est;
  }
  for (int d : delays)
    if (d < 0 || d >= static_cast<int>(X.size()))
      throw std::invalid_argument("ls_estimate: delay outside the symbol");
  const auto bins = occupied_bins(X);
  const MatrixXcd F = delay_basis(bins, delays, X.size());
  VectorXcd Hocc(bins.size());
  for (std::size_t i = 0; i < bins.size(); ++i) Hocc(i) = H[bins[i]];
  const VectorXcd h = tap_projector(F) * Hocc;
  est.taps.assign(h.data(), h.data() + h.size());
  est.delays = delays;
  est.residual_power = bin_residual(H, bins, F, h);
  est.freq_response = std::move(H);
  est.validate();
  return est;
}

void check_lts(std::span<const cd> y, const std::vector<cd> &X) {
  if (X.size() != kNumSubcarriers)
    throw std::invalid_argument("ls_estimate: reference must have 64 bins");
  if (y.size() != X.size())
    throw std::invalid_argument("ls_estimate: received LTS length mismatch");
  if (std::all_of(y.begin(), y.end(), [](cd v) { return v == cd(0.0, 0.0); }))
    throw std::invalid_argument("ls_estimate: all-zero received LTS");
  for (cd v : y)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw NonFiniteError("ls_estimate: non-finite received sample");
}

}  // namespace

ChannelEstimate ls_estimate(std::span<const cd> rx_lts1, std::span<const cd> rx_lts2,
                            const std::vector<cd> &X, const std::vector<int> &delays) {
  check_lts(rx_lts1, X);
  check_lts(rx_lts2, X);
  const auto Y1 = dft(rx_lts1);
  const auto Y2 = dft(rx_lts2);
  std::vector<cd> H(X.size(), cd(0.0, 0.0));
  for (std::size_t k = 0; k < X.size(); ++k)
    if (X[k] != cd(0.0, 0.0)) H[k] = 0.5 * (Y1[k] + Y2[k]) / X[k];
  return ls_from_response(std::move(H), X, delays, 2);
}

ChannelEstimate ls_estimate_single(std::span<const cd> rx_lts, const std::vector<cd> &X,
                                   const std::vector<int> &delays) {
  check_lts(rx_lts, X);
  const auto Y = dft(rx_lts);
  std::vector<cd> H(X.size(), cd(0.0, 0.0));
  for (std::size_t k = 0; k < X.size(); ++k)
    if (X[k] != cd(0.0, 0.0)) H[k] = Y[k] / X[k];
  return ls_from_response(std::move(H), X, delays, 1);
}

ChannelEstimate lmmse_estimate(const ChannelEstimate &ls, const ChannelProfile &profile,
                               double noise_variance, const std::vector<cd> &X) {
  if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance))
    throw std::invalid_argument("lmmse_estimate: noise variance must be finite and >= 0");
  if (ls.taps.size() != profile.n_paths())
    throw std::invalid_argument("lmmse_estimate: LS taps do not match the profile");
  if (ls.freq_response.size() != X.size())
    throw std::invalid_argument("lmmse_estimate: LS estimate lacks its frequency response");

  const auto bins = occupied_bins(X);
  const MatrixXcd F = delay_basis(bins, ls.delays, X.size());
  const MatrixXcd P = tap_projector(F);

  // Noise on H_L(k) has variance (N_c / n_lts) sigma^2 / |X(k)|^2 under the
  // unnormalized DFT. Q is its variance on each fitted tap; the fit's small
  // cross-tap correlations are dropped so every tap gets a scalar Wiener
  // gain that shrinks monotonically with sigma^2.
  const double scale = static_cast<double>(X.size()) / static_cast<double>(ls.n_lts);
  VectorXd w(bins.size());
  for (std::size_t i = 0; i < bins.size(); ++i) w(i) = scale / std::norm(X[bins[i]]);
  const VectorXd q = (P * w.asDiagonal() * P.adjoint()).diagonal().real();

  const auto L = static_cast<Eigen::Index>(ls.taps.size());
  VectorXcd hm(L);
  for (Eigen::Index l = 0; l < L; ++l) {
    const double r = profile.variances[l];
    const double den = r + noise_variance * q(l);
    if (!(den > 0.0)) throw std::domain_error("lmmse_estimate: R + sigma^2 Q is singular");
    hm(l) = (r / den) * ls.taps[l];
  }

  ChannelEstimate est = ls;
  est.method = EstimatorKind::kLmmse;
  est.taps.assign(hm.data(), hm.data() + hm.size());
  est.noise_variance_used = noise_variance;
  est.residual_power = bin_residual(ls.freq_response, bins, F, hm);
  est.validate();
  return est;
}

double QuadraticCost::operator()(std::span<const double> v) const {
  const Eigen::Map<const VectorXd> x(v.data(), static_cast<Eigen::Index>(v.size()));
  return c0 - 2.0 * g.dot(x) + x.dot(G * x);
}

NmCosts build_nm_costs(const ComplexBaseband &r, const ComplexBaseband &candidate,
                       const std::vector<int> &abs_delays) {
  if (r.empty() || candidate.empty())
    throw std::invalid_argument("build_nm_costs: empty signal");
  if (abs_delays.empty()) throw std::invalid_argument("build_nm_costs: no delays");
  const int n_r = static_cast<int>(r.size());
  const int n_x = static_cast<int>(candidate.size());
  for (int d : abs_delays)
    if (d < 0 || d >= n_r)
      throw std::invalid_argument("build_nm_costs: delay outside the received signal");

  const int dmin = *std::min_element(abs_delays.begin(), abs_delays.end());
  const int dmax = *std::max_element(abs_delays.begin(), abs_delays.end());
  const int t0 = dmin, t1 = std::min(n_r, dmax + n_x);
  const auto L = static_cast<Eigen::Index>(abs_delays.size());
  const Eigen::Index T = t1 - t0;

  MatrixXd A1 = MatrixXd::Zero(T, 2 * L), A2 = MatrixXd::Zero(T, 2 * L);
  VectorXd y1(T), y2(T);
  for (Eigen::Index t = 0; t < T; ++t) {
    const int m = t0 + static_cast<int>(t);
    y1(t) = r[m].real();
    y2(t) = r[m].imag();
    for (Eigen::Index k = 0; k < L; ++k) {
      const int i = m - abs_delays[k];
      if (i < 0 || i >= n_x) continue;
      const cd x = candidate[i];
      // Re{h x} = hr Re x - hi Im x,  Im{h x} = hr Im x + hi Re x
      A1(t, 2 * k) = x.real();
      A1(t, 2 * k + 1) = -x.imag();
      A2(t, 2 * k) = x.imag();
      A2(t, 2 * k + 1) = x.real();
    }
  }

  NmCosts c;
  c.span_begin = static_cast<std::size_t>(t0);
  c.span_end = static_cast<std::size_t>(t1);
  c.c1.G = A1.transpose() * A1;
  c.c1.g = A1.transpose() * y1;
  c.c1.c0 = y1.squaredNorm();
  c.c2.G = A2.transpose() * A2;
  c.c2.g = A2.transpose() * y2;
  c.c2.c0 = y2.squaredNorm();
  return c;
}

ChannelEstimate nm_estimate(const ComplexBaseband &r,
                            const std::vector<ComplexBaseband> &candidates,
                            std::size_t origin, const std::vector<int> &delays,
                            const NmConfig &cfg,
                            const std::optional<std::vector<cd>> &warm_start) {
  if (candidates.empty()) throw std::invalid_argument("nm_estimate: no candidates");
  if (delays.empty()) throw std::invalid_argument("nm_estimate: no delays");
  cfg.validate();
  for (const auto &c : candidates)
    if (c.size() != candidates.front().size() || c.empty())
      throw std::invalid_argument("nm_estimate: candidates must share one nonzero length");
  if (warm_start && warm_start->size() != delays.size())
    throw std::invalid_argument("nm_estimate: warm start does not match the delays");

  std::vector<int> abs_delays(delays.size());
  for (std::size_t k = 0; k < delays.size(); ++k) {
    if (delays[k] < 0) throw std::invalid_argument("nm_estimate: negative delay");
    abs_delays[k] = static_cast<int>(origin) + delays[k];
  }

  // Start from the given taps, else from LS on the received LTS pair, else
  // from zero.
  std::optional<std::vector<cd>> start = warm_start;
  if (!start && origin + kPreambleLength <= r.size()) {
    try {
      const std::span<const cd> rs(r.samples);
      start = ls_estimate(rs.subspan(origin + kLts1Start, kLtsLength),
                          rs.subspan(origin + kLts2Start, kLtsLength),
                          lts_frequency_reference(), delays)
                  .taps;
    } catch (const std::exception &) {
      start.reset();
    }
  }
  std::vector<double> x0(2 * delays.size(), 0.0);
  if (start)
    for (std::size_t k = 0; k < delays.size(); ++k) {
      x0[2 * k] = (*start)[k].real();
      x0[2 * k + 1] = (*start)[k].imag();
    }

  struct Fit {
    bool ok = false;
    std::vector<cd> taps;
    double residual = 0.0;
  };
  std::vector<Fit> fits(candidates.size());
  std::string last_error;

  for (std::size_t c = 0; c < candidates.size(); ++c) {
    // Identical candidates give identical fits.
    std::size_t same = c;
    for (std::size_t p = 0; p < c; ++p)
      if (candidates[p].samples == candidates[c].samples) {
        same = p;
        break;
      }
    if (same != c) {
      fits[c] = fits[same];
      continue;
    }

    try {
      const NmCosts costs = build_nm_costs(r, candidates[c], abs_delays);
      const auto r1 = nelder_mead_minimize(
          [&costs](std::span<const double> v) { return costs.c1(v); }, x0, cfg);
      const auto r2 = nelder_mead_minimize(
          [&costs](std::span<const double> v) { return costs.c2(v); }, x0, cfg);
      std::vector<double> avg(x0.size());
      for (std::size_t j = 0; j < avg.size(); ++j) avg[j] = 0.5 * (r1.x[j] + r2.x[j]);
      Fit fit;
      fit.taps.resize(delays.size());
      for (std::size_t k = 0; k < delays.size(); ++k)
        fit.taps[k] = cd(avg[2 * k], avg[2 * k + 1]);
      // C1 + C2 is the complex residual energy over the span.
      const double energy = costs.c1(avg) + costs.c2(avg);
      const double n = static_cast<double>(costs.span_end - costs.span_begin);
      fit.residual = std::max(0.0, energy) / n;
      fit.ok = std::isfinite(fit.residual) && all_finite(fit.taps);
      fits[c] = std::move(fit);
    } catch (const NonFiniteError &e) {
      last_error = e.what();
    }
  }

  std::size_t best = candidates.size();
  for (std::size_t c = 0; c < fits.size(); ++c)
    if (fits[c].ok && (best == candidates.size() || fits[c].residual < fits[best].residual))
      best = c;
  if (best == candidates.size())
    throw NonFiniteError("nm_estimate: every candidate failed" +
                         (last_error.empty() ? std::string() : ": " + last_error));

  ChannelEstimate est;
  est.method = EstimatorKind::kNm;
  est.taps = fits[best].taps;
  est.delays = delays;
  est.residual_power = fits[best].residual;
  est.candidate_index = best;
  est.validate();
  return est;
}

double squared_error(const ChannelRealization &truth, const ChannelEstimate &est) {
  std::map<int, std::pair<cd, cd>> by_delay;
  for (std::size_t k = 0; k < truth.taps.size(); ++k)
    by_delay[truth.delays[k]].first += truth.taps[k];
  for (std::size_t k = 0; k < est.taps.size(); ++k)
    by_delay[est.delays[k]].second += est.taps[k];
  double e = 0.0;
  for (const auto &[d, p] : by_delay) e += std::norm(p.first - p.second);
  return e;
}

void write_estimate_csv_header(std::ostream &os) {
  os << "method,tap_index,delay_samples,re,im,residual_power\n";
}

void write_estimate_csv(std::ostream &os, const ChannelEstimate &est) {
  os << std::setprecision(17);
  for (std::size_t k = 0; k < est.taps.size(); ++k)
    os << to_string(est.method) << ',' << k << ',' << est.delays[k] << ','
       << est.taps[k].real() << ',' << est.taps[k].imag() << ',' << est.residual_power
       << '\n';
}

}  // namespace rfdna
