// rfdna/fingerprint.h

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

#ifndef RFDNA_FINGERPRINT_H_
#define RFDNA_FINGERPRINT_H_

#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rfdna/baseband.h"

namespace rfdna {

enum class WindowShape { kGaussian, kRectangular, kImpulse, kCustom };

struct GaborConfig {
  std::size_t M = 186;    // time shifts
  std::size_t K_G = 186;  // frequency bins
  std::size_t N_delta = 1;
  WindowShape window = WindowShape::kGaussian;
  double gaussian_sigma = 0.0;       // 0 means M / 8
  std::vector<double> custom_window;  // length M * N_delta when kCustom

  std::size_t period() const { return M * N_delta; }
  /// Throws std::invalid_argument on zero sizes, K_G < N_delta, or
  /// (M N_delta) mod K_G != 0.
  void validate() const;
  /// W(m), m = 0 .. period-1, centered on m = 0 and periodic.
  std::vector<double> window_samples() const;
};

using ComplexMatrix = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RealMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// G(eta-1, k) = sum_m s(m) W*(m - eta N_delta) exp(-j2pi k m / K_G) for
/// eta = 1..M, k = 0..K_G-1. `s` is trimmed or cyclically extended to the
/// period M N_delta.
ComplexMatrix gabor_coefficients(const ComplexBaseband &s, const GaborConfig &cfg = {});

enum class SurfaceKind { kMagnitude, kPhase };

std::string to_string(SurfaceKind k);
/// Accepts "mag" and "phase".
SurfaceKind parse_surface_kind(const std::string &s);

struct TFSurface {
  RealMatrix values;  // M x K_G
  SurfaceKind kind = SurfaceKind::kMagnitude;
};

/// Magnitude: |G|^2 / max |G|^2. Phase: principal argument in (-pi, pi].
TFSurface to_surface(const ComplexMatrix &G, SurfaceKind kind);

enum class Statistic { kStd, kVariance, kSkewness, kKurtosis };

struct FeatureTag {
  int region;  // patch index, or kWholeSurface
  Statistic stat;
};
inline constexpr int kWholeSurface = -1;

struct Fingerprint {
  std::vector<double> features;
  std::vector<FeatureTag> layout;
  SurfaceKind kind = SurfaceKind::kMagnitude;
  std::size_t n_regions = 0;
};

struct Moments {
  double stddev, variance, skewness, kurtosis;  // population; excess kurtosis
};

/// Two-pass central moments. Zero variance gives skewness = kurtosis = 0.
Moments moments(const double *x, std::size_t n);

/// Non-overlapping n_t x n_f patches, row-major from the origin, remainder
/// dropped. Features: 4 stats per patch in patch order, then the whole
/// surface's 4 stats.
Fingerprint extract_fingerprint(const TFSurface &surface, std::size_t n_t = 12,
                                std::size_t n_f = 10);

struct FingerprintConfig {
  GaborConfig gabor;
  std::size_t n_t = 12;
  std::size_t n_f = 10;

  std::size_t n_features() const;
};

/// Gabor surface of the first M N_delta samples, then patch statistics.
Fingerprint rf_dna_fingerprint(const ComplexBaseband &s, SurfaceKind kind,
                               const FingerprintConfig &cfg = {});

/// Both kinds from one Gabor transform.
std::pair<Fingerprint, Fingerprint> rf_dna_fingerprints(const ComplexBaseband &s,
                                                        const FingerprintConfig &cfg = {});

/// Header "radio_id,snr_db,trial,f_0001..f_NNNN".
void write_fingerprint_csv_header(std::ostream &os, std::size_t n_features);
void write_fingerprint_csv_row(std::ostream &os, int radio_id, double snr_db,
                               std::size_t trial, const Fingerprint &fp);
void write_surface_csv(std::ostream &os, const TFSurface &s);

}  // namespace rfdna

#endif  // RFDNA_FINGERPRINT_H_
