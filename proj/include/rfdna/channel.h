// rfdna/channel.h

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

#ifndef RFDNA_CHANNEL_H_
#define RFDNA_CHANNEL_H_

#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "rfdna/baseband.h"
#include "rfdna/random.h"

namespace rfdna {

/// Statistical tapped-delay-line description.
struct ChannelProfile {
  std::string name;
  std::vector<double> delays_ns;   // strictly increasing
  std::vector<double> variances;   // E|alpha_k|^2, summing to 1
  double rms_delay_spread_ns = 0;  // informational; 0 when unused
  // The "none" profile: one unit tap at zero delay that is not faded.
  bool fading = true;

  std::size_t n_paths() const { return delays_ns.size(); }

  /// Delays in whole samples at `sample_rate`. Throws if a delay is not an
  /// integer number of sample periods.
  std::vector<int> sample_delays(double sample_rate = kSampleRate) const;

  /// Throws std::invalid_argument on length mismatch, non-increasing or
  /// off-grid delays, negative variances, or total power outside 1 +- 1e-3.
  void validate(double sample_rate = kSampleRate) const;
};

/// One drawn set of taps.
struct ChannelRealization {
  std::vector<cd> taps;
  std::vector<int> delays;  // samples

  int max_delay() const;
};

/// Per-component variance of path k under an exponential power-delay
/// profile: 0.5 * (1 - exp(-Ts/Tr)) * exp(-k Ts/Tr).
double tap_variance(std::size_t k, double sample_period, double rms_delay_spread);

/// Builds an L-path profile on a one-sample delay grid from tap_variance,
/// with total power normalized to 1.
ChannelProfile exponential_profile(std::size_t n_paths, double rms_delay_spread_ns,
                                   double sample_rate = kSampleRate);

/// Shipped profiles: "l2", "l3", "l5" and "none".
ChannelProfile shipped_profile(const std::string &name);
std::vector<std::string> shipped_profile_names();

/// alpha_k = A + jB with Var(A) = Var(B) = sigma_k^2 / 2. The "none"
/// profile returns its unit tap without consuming randomness.
ChannelRealization draw_channel(const ChannelProfile &profile, Rng &rng,
                                double sample_rate = kSampleRate);

/// Full linear convolution; output length is input length + max delay.
ComplexBaseband apply_channel(const ComplexBaseband &s, const ChannelRealization &ch);

struct NoisySignal {
  ComplexBaseband signal;
  double noise_variance = 0.0;  // E|n|^2 per complex sample
  double signal_power = 0.0;    // reference power P_s
};

/// Index range [first, last) from the first to the last nonzero sample.
std::pair<std::size_t, std::size_t> occupied_span(const std::vector<cd> &s);

inline constexpr double kNoiseless = std::numeric_limits<double>::infinity();

/// Adds circular white Gaussian noise with E|n|^2 = P_s / 10^(snr/10), P_s
/// being the mean power over the occupied span. snr_db = +inf disables the
/// noise.
NoisySignal add_awgn(const ComplexBaseband &s, double snr_db, Rng &rng);

/// "L=<n>; delays_ns=<csv>; variances=<csv>"
ChannelProfile parse_channel_profile(const std::string &text);
std::string format_channel_profile(const ChannelProfile &profile);

/// CSV "tap_index, delay_samples, re, im".
void write_realization_csv(std::ostream &os, const ChannelRealization &ch);

}  // namespace rfdna

#endif  // RFDNA_CHANNEL_H_
