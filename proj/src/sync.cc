// rfdna/sync.cc

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

#include "rfdna/sync.h"

#include <cmath>
#include <iomanip>
#include <limits>

#include "rfdna/signal_model.h"

namespace rfdna {

namespace {

constexpr std::size_t kWindow = kStsLength;
constexpr std::size_t kNinthSts = 8 * kStsLength;

struct WindowSums {
  cd c1, c2;
  double energy;
};

// Caller guarantees theta + kWindow + 2 * kWindow <= size.
WindowSums window_sums(const std::vector<cd> &r, std::size_t theta) {
  WindowSums w{cd(0.0, 0.0), cd(0.0, 0.0), 0.0};
  for (std::size_t m = 0; m < kWindow; ++m) {
    const cd a = r[theta + m];
    w.c1 += a * std::conj(r[theta + m + kWindow]);
    w.c2 += a * std::conj(r[theta + m + 2 * kWindow]);
    w.energy += std::norm(a);
  }
  return w;
}

}  // namespace

cd timing_correlation(const ComplexBaseband &r, std::size_t theta, std::size_t lag) {
  if (theta + kWindow + lag > r.size())
    throw std::out_of_range("timing_metric: window exceeds signal");
  cd num(0.0, 0.0);
  double den = 0.0;
  for (std::size_t m = 0; m < kWindow; ++m) {
    num += r[theta + m] * std::conj(r[theta + m + lag]);
    den += std::norm(r[theta + m]);
  }
  if (den == 0.0) throw std::domain_error("timing_metric: zero-energy window");
  return num / den;
}

double timing_metric(const ComplexBaseband &r, std::size_t theta, std::size_t lag) {
  return std::abs(timing_correlation(r, theta, lag));
}

TimingEstimate estimate_time_offset(const ComplexBaseband &r) {
  if (r.size() < kPreambleLength)
    throw std::invalid_argument("estimate_time_offset: signal shorter than a preamble");
  if (!all_finite(r.samples))
    throw NonFiniteError("estimate_time_offset: non-finite sample");

  TimingEstimate est;
  est.trace_theta0 = kNinthSts;
  const std::size_t n_theta = r.size() - kPreambleLength + 1;
  est.metric_trace.resize(n_theta, 0.0);

  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < n_theta; ++i) {
    const WindowSums w = window_sums(r.samples, kNinthSts + i);
    double v = 0.0;
    if (w.energy > 0.0) v = (std::abs(w.c1) - std::abs(w.c2)) / w.energy;
    est.metric_trace[i] = v;
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  est.first_path_offset = best_i;
  est.theta_hat = best_i + kNinthSts;
  return est;
}

void write_metric_trace_csv(std::ostream &os, const TimingEstimate &est) {
  os << "theta,m1_minus_m2\n" << std::setprecision(17);
  for (std::size_t i = 0; i < est.metric_trace.size(); ++i)
    os << est.trace_theta0 + i << ',' << est.metric_trace[i] << '\n';
}

}  // namespace rfdna
