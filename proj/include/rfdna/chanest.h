// rfdna/chanest.h

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

#ifndef RFDNA_CHANEST_H_
#define RFDNA_CHANEST_H_

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rfdna/baseband.h"
#include "rfdna/channel.h"
#include "rfdna/nelder_mead.h"

namespace rfdna {

enum class EstimatorKind { kLs, kLmmse, kNm };

std::string to_string(EstimatorKind k);
/// Accepts "ls", "mmse"/"lmmse", "nm".
EstimatorKind parse_estimator(const std::string &s);

struct ChannelEstimate {
  std::vector<cd> taps;
  std::vector<int> delays;  // samples, relative to the estimated burst start
  EstimatorKind method = EstimatorKind::kLs;
  double residual_power = 0.0;
  double noise_variance_used = 0.0;  // LMMSE only
  std::size_t n_lts = 2;             // LS/LMMSE: LTS symbols averaged
  std::size_t candidate_index = 0;   // NM: winning candidate
  std::vector<cd> freq_response;     // LS: H_L(k) on the 64 bins, 0 where X(k) == 0

  void validate() const;
};

/// Two-LTS least squares. H_L(k) = (Y1(k) + Y2(k)) / (2 X(k)) on the bins
/// where X is nonzero. Taps at `delays` are the least-squares fit of H_L over
/// those bins; with no delays given, all 64 IDFT taps are returned.
ChannelEstimate ls_estimate(std::span<const cd> rx_lts1, std::span<const cd> rx_lts2,
                            const std::vector<cd> &X, const std::vector<int> &delays = {});

/// Single-LTS form, H_L(k) = Y(k) / X(k).
ChannelEstimate ls_estimate_single(std::span<const cd> rx_lts, const std::vector<cd> &X,
                                   const std::vector<int> &delays = {});

/// h_M = R [R + sigma^2 Q]^-1 h_L, R = diag(profile variances) at the LS
/// delays and Q = diag of the variance the LS tap fit gives unit-variance
/// noise on each tap.
ChannelEstimate lmmse_estimate(const ChannelEstimate &ls, const ChannelProfile &profile,
                               double noise_variance, const std::vector<cd> &X);

/// Real quadratic form c0 - 2 g.v + v.G.v over interleaved
/// [h1_re, h1_im, h2_re, ...].
struct QuadraticCost {
  Eigen::MatrixXd G;
  Eigen::VectorXd g;
  double c0 = 0.0;

  double operator()(std::span<const double> v) const;
  std::size_t dim() const { return static_cast<std::size_t>(g.size()); }
};

struct NmCosts {
  QuadraticCost c1;  // sum_T (Re r - Re{h * x})^2
  QuadraticCost c2;  // sum_T (Im r - Im{h * x})^2
  std::size_t span_begin = 0, span_end = 0;
};

/// Costs of the model r(m) = sum_k h_k x(m - D_k) over T = [min D, max D +
/// len(x)) clipped to r. `abs_delays` are positions in r.
NmCosts build_nm_costs(const ComplexBaseband &r, const ComplexBaseband &candidate,
                       const std::vector<int> &abs_delays);

/// Nelder-Mead estimate over candidate preambles. Each candidate is fitted on
/// C1 and C2 separately, the two solutions are averaged, and the candidate
/// with the lowest residual power wins (lowest index on ties). `origin` is
/// the estimated burst start in r; `delays` are relative to it.
/// Without a warm start the simplex starts from LS on the LTS pair at
/// `origin` (zeros when that window is unavailable). Bit-identical
/// candidates are solved once.
ChannelEstimate nm_estimate(const ComplexBaseband &r,
                            const std::vector<ComplexBaseband> &candidates,
                            std::size_t origin, const std::vector<int> &delays,
                            const NmConfig &cfg = {},
                            const std::optional<std::vector<cd>> &warm_start = {});

/// sum over the union of delays of |h - h_est|^2, missing taps taken as 0.
double squared_error(const ChannelRealization &truth, const ChannelEstimate &est);

/// CSV rows "method, tap_index, delay_samples, re, im, residual_power".
void write_estimate_csv_header(std::ostream &os);
void write_estimate_csv(std::ostream &os, const ChannelEstimate &est);

}  // namespace rfdna

#endif  // RFDNA_CHANEST_H_
