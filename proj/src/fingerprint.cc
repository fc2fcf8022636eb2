// rfdna/fingerprint.cc

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

#include "rfdna/fingerprint.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>

#include "rfdna/fft.h"

namespace rfdna {

void GaborConfig::validate() const {
  if (M == 0 || K_G == 0 || N_delta == 0)
    throw std::invalid_argument("GaborConfig: M, K_G and N_delta must be positive");
  if (K_G < N_delta) throw std::invalid_argument("GaborConfig: K_G must be >= N_delta");
  if ((M * N_delta) % K_G != 0)
    throw std::invalid_argument("GaborConfig: M * N_delta must be a multiple of K_G");
  if (window == WindowShape::kGaussian && gaussian_sigma < 0.0)
    throw std::invalid_argument("GaborConfig: negative window width");
  if (window == WindowShape::kCustom && custom_window.size() != period())
    throw std::invalid_argument("GaborConfig: custom window must span one period");
}

std::vector<double> GaborConfig::window_samples() const {
  const std::size_t P = period();
  std::vector<double> w(P, 0.0);
  switch (window) {
    case WindowShape::kGaussian: {
      const double sigma = gaussian_sigma > 0.0 ? gaussian_sigma : static_cast<double>(M) / 8.0;
      for (std::size_t m = 0; m < P; ++m) {
        const double t = static_cast<double>(std::min(m, P - m));
        w[m] = std::exp(-0.5 * (t / sigma) * (t / sigma));
      }
      break;
    }
    case WindowShape::kRectangular:
      std::fill(w.begin(), w.end(), 1.0);
      break;
    case WindowShape::kImpulse:
      w[0] = 1.0;
      break;
    case WindowShape::kCustom:
      w = custom_window;
      break;
  }
  return w;
}

ComplexMatrix gabor_coefficients(const ComplexBaseband &s, const GaborConfig &cfg) {
  cfg.validate();
  if (s.empty()) throw std::invalid_argument("gabor_coefficients: empty signal");
  const std::size_t P = cfg.period();
  const std::size_t K = cfg.K_G;
  const auto W = cfg.window_samples();

  std::vector<cd> x(P);
  for (std::size_t m = 0; m < P; ++m) x[m] = s.samples[m % s.size()];

  ComplexMatrix G(cfg.M, K);
  for (std::size_t eta = 1; eta <= cfg.M; ++eta) {
    const std::size_t shift = (eta * cfg.N_delta) % P;
    cd *row = G.data() + (eta - 1) * K;
    std::fill(row, row + K, cd(0.0, 0.0));
    // exp(-j2pi k m / K) only depends on m mod K, so fold before the DFT.
    // W index (m - shift) mod P, split at the wrap.
    for (std::size_t m = 0, j = 0; m < P; ++m) {
      const std::size_t wi = m >= shift ? m - shift : m + P - shift;
      row[j] += x[m] * W[wi];
      if (++j == K) j = 0;
    }
  }
  dft_rows_inplace(std::span<cd>(G.data(), static_cast<std::size_t>(G.size())), K);
  return G;
}

std::string to_string(SurfaceKind k) { return k == SurfaceKind::kMagnitude ? "mag" : "phase"; }

SurfaceKind parse_surface_kind(const std::string &s) {
  if (s == "mag" || s == "magnitude") return SurfaceKind::kMagnitude;
  if (s == "phase") return SurfaceKind::kPhase;
  throw std::invalid_argument("unknown fingerprint kind '" + s + "'");
}

TFSurface to_surface(const ComplexMatrix &G, SurfaceKind kind) {
  if (G.size() == 0) throw std::invalid_argument("to_surface: empty matrix");
  TFSurface out;
  out.kind = kind;
  out.values.resize(G.rows(), G.cols());
  if (kind == SurfaceKind::kMagnitude) {
    double peak = 0.0;
    for (Eigen::Index i = 0; i < G.size(); ++i) {
      const double v = std::norm(G.data()[i]);
      out.values.data()[i] = v;
      peak = std::max(peak, v);
    }
    if (!(peak > 0.0)) throw std::invalid_argument("to_surface: all-zero coefficients");
    if (!std::isfinite(peak)) throw NonFiniteError("to_surface: non-finite coefficient");
    out.values /= peak;
  } else {
    for (Eigen::Index i = 0; i < G.size(); ++i) {
      double a = std::arg(G.data()[i]);
      if (a <= -kPi) a = kPi;
      out.values.data()[i] = a;
    }
  }
  return out;
}

Moments moments(const double *x, std::size_t n) {
  if (n == 0) throw std::invalid_argument("moments: empty sample");
  double mean = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean += x[i];
    peak = std::max(peak, std::abs(x[i]));
  }
  mean /= static_cast<double>(n);
  // One correction pass removes the rounding left in the running sum, so
  // constant data lands on its value exactly.
  double corr = 0.0;
  for (std::size_t i = 0; i < n; ++i) corr += x[i] - mean;
  mean += corr / static_cast<double>(n);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  m2 *= inv_n;
  m3 *= inv_n;
  m4 *= inv_n;
  // Rounding in the mean leaves ~eps^2 residue on constant data.
  const double floor = 1e-14 * peak;
  if (m2 <= floor * floor) return {0.0, 0.0, 0.0, 0.0};
  return {std::sqrt(m2), m2, m3 / (m2 * std::sqrt(m2)), m4 / (m2 * m2) - 3.0};
}

Fingerprint extract_fingerprint(const TFSurface &surface, std::size_t n_t, std::size_t n_f) {
  const auto rows = static_cast<std::size_t>(surface.values.rows());
  const auto cols = static_cast<std::size_t>(surface.values.cols());
  if (rows == 0 || cols == 0) throw std::invalid_argument("extract_fingerprint: empty surface");
  if (n_t == 0 || n_f == 0 || n_t > rows || n_f > cols)
    throw std::invalid_argument("extract_fingerprint: patch exceeds surface");
  if (!std::all_of(surface.values.data(), surface.values.data() + surface.values.size(),
                   [](double v) { return std::isfinite(v); }))
    throw NonFiniteError("extract_fingerprint: non-finite surface value");

  const std::size_t pr = rows / n_t, pc = cols / n_f;
  Fingerprint fp;
  fp.kind = surface.kind;
  fp.n_regions = pr * pc;
  fp.features.reserve((fp.n_regions + 1) * 4);
  fp.layout.reserve((fp.n_regions + 1) * 4);

  auto push = [&fp](int region, const Moments &m) {
    fp.features.insert(fp.features.end(), {m.stddev, m.variance, m.skewness, m.kurtosis});
    fp.layout.push_back({region, Statistic::kStd});
    fp.layout.push_back({region, Statistic::kVariance});
    fp.layout.push_back({region, Statistic::kSkewness});
    fp.layout.push_back({region, Statistic::kKurtosis});
  };

  std::vector<double> patch(n_t * n_f);
  int region = 0;
  for (std::size_t a = 0; a < pr; ++a)
    for (std::size_t b = 0; b < pc; ++b, ++region) {
      std::size_t i = 0;
      for (std::size_t r = 0; r < n_t; ++r)
        for (std::size_t c = 0; c < n_f; ++c) patch[i++] = surface.values(a * n_t + r, b * n_f + c);
      push(region, moments(patch.data(), patch.size()));
    }
  push(kWholeSurface, moments(surface.values.data(), rows * cols));
  return fp;
}

std::size_t FingerprintConfig::n_features() const {
  return ((gabor.M / n_t) * (gabor.K_G / n_f) + 1) * 4;
}

namespace {

ComplexMatrix gabor_of_preamble(const ComplexBaseband &s, const FingerprintConfig &cfg) {
  cfg.gabor.validate();
  const std::size_t P = cfg.gabor.period();
  if (s.size() < P) return gabor_coefficients(s, cfg.gabor);
  ComplexBaseband head(std::vector<cd>(s.samples.begin(), s.samples.begin() + P), s.sample_rate);
  return gabor_coefficients(head, cfg.gabor);
}

}  // namespace

Fingerprint rf_dna_fingerprint(const ComplexBaseband &s, SurfaceKind kind,
                               const FingerprintConfig &cfg) {
  const auto G = gabor_of_preamble(s, cfg);
  return extract_fingerprint(to_surface(G, kind), cfg.n_t, cfg.n_f);
}

std::pair<Fingerprint, Fingerprint> rf_dna_fingerprints(const ComplexBaseband &s,
                                                        const FingerprintConfig &cfg) {
  const auto G = gabor_of_preamble(s, cfg);
  return {extract_fingerprint(to_surface(G, SurfaceKind::kMagnitude), cfg.n_t, cfg.n_f),
          extract_fingerprint(to_surface(G, SurfaceKind::kPhase), cfg.n_t, cfg.n_f)};
}

void write_fingerprint_csv_header(std::ostream &os, std::size_t n_features) {
  os << "radio_id,snr_db,trial";
  char buf[16];
  for (std::size_t i = 1; i <= n_features; ++i) {
    std::snprintf(buf, sizeof buf, ",f_%04zu", i);
    os << buf;
  }
  os << '\n';
}

void write_fingerprint_csv_row(std::ostream &os, int radio_id, double snr_db,
                               std::size_t trial, const Fingerprint &fp) {
  os << std::setprecision(17) << radio_id << ',' << snr_db << ',' << trial;
  for (double v : fp.features) os << ',' << v;
  os << '\n';
}

void write_surface_csv(std::ostream &os, const TFSurface &s) {
  os << std::setprecision(17);
  for (Eigen::Index r = 0; r < s.values.rows(); ++r) {
    for (Eigen::Index c = 0; c < s.values.cols(); ++c) os << (c ? "," : "") << s.values(r, c);
    os << '\n';
  }
}

}  // namespace rfdna
