// rfdna/sync.h

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

#ifndef RFDNA_SYNC_H_
#define RFDNA_SYNC_H_

#include <ostream>
#include <vector>

#include "rfdna/baseband.h"

namespace rfdna {

struct TimingEstimate {
  std::size_t theta_hat = 0;          // start of the ninth STS
  std::size_t first_path_offset = 0;  // theta_hat - 8 * N_s
  // metric_trace[i] is M1 - M2 at theta = trace_theta0 + i.
  std::vector<double> metric_trace;
  std::size_t trace_theta0 = 0;
};

/// |sum_{m<N_s} r(theta+m) r*(theta+m+lag)| / sum_{m<N_s} |r(theta+m)|^2.
/// Throws std::out_of_range when the window runs past the signal and
/// std::domain_error when the denominator window has zero energy.
double timing_metric(const ComplexBaseband &r, std::size_t theta, std::size_t lag);

/// The same ratio before the magnitude is taken.
cd timing_correlation(const ComplexBaseband &r, std::size_t theta, std::size_t lag);

/// Argmax of M1(theta) - M2(theta) over every burst start that leaves a full
/// preamble inside `r`, i.e. theta - 128 in [0, len - 320]. Windows with zero
/// energy score 0. Ties go to the earliest theta.
TimingEstimate estimate_time_offset(const ComplexBaseband &r);

/// Two-column CSV "theta, m1_minus_m2".
void write_metric_trace_csv(std::ostream &os, const TimingEstimate &est);

}  // namespace rfdna

#endif  // RFDNA_SYNC_H_
