// rfdna/signal_model.h

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

#ifndef RFDNA_SIGNAL_MODEL_H_
#define RFDNA_SIGNAL_MODEL_H_

#include <string>
#include <vector>

#include "rfdna/baseband.h"

namespace rfdna {

// 802.11a preamble geometry at 20 MS/s.
inline constexpr std::size_t kNumSubcarriers = 64;  // N_c
inline constexpr std::size_t kStsLength = 16;       // N_s, 0.8 us
inline constexpr std::size_t kNumSts = 10;
inline constexpr std::size_t kLtsGuardLength = 32;
inline constexpr std::size_t kLtsLength = 64;
inline constexpr std::size_t kLts1Start = kNumSts * kStsLength + kLtsGuardLength;  // 192
inline constexpr std::size_t kLts2Start = kLts1Start + kLtsLength;                // 256
inline constexpr std::size_t kPreambleLength = kLts2Start + kLtsLength;          // 320

/// Short + long training sequence: 10 STS, a 32-sample guard, 2 LTS.
/// Time-domain amplitudes follow the standard's 1/64 IDFT scaling.
ComplexBaseband generate_preamble(double sample_rate = kSampleRate);

/// Known LTS symbol over the 64 FFT bins (DFT order: bin k >= 0 is
/// subcarrier k, bin 64+k is subcarrier k < 0). 52 entries are +-1.
std::vector<cd> lts_frequency_reference();

/// STS symbol over the 64 FFT bins, including the sqrt(13/6) factor.
std::vector<cd> sts_frequency_reference();

/// Transmitter RF-chain nonidealities for one emitter.
struct EmitterProfile {
  std::string id = "identity";
  double iq_gain_imbalance_db = 0.0;
  double iq_phase_imbalance_deg = 0.0;
  cd a1{1.0, 0.0};  // PA polynomial y = a1 u + a3 u|u|^2 + a5 u|u|^4
  cd a3{0.0, 0.0};
  cd a5{0.0, 0.0};
  double residual_cfo_hz = 0.0;
  cd dc_offset{0.0, 0.0};

  /// Throws std::invalid_argument on non-finite fields, |a1| == 0, or a CFO
  /// outside +-sample_rate/100.
  void validate(double sample_rate = kSampleRate) const;
  bool is_identity() const;
};

/// Applies IQ imbalance, the PA polynomial, residual CFO rotation and DC
/// offset, in that order. The identity profile returns `s` bit for bit.
///
/// IQ imbalance puts the whole skew on the quadrature rail:
///   I' = I,  Q' = g (Q cos(phi) - I sin(phi)),  g = 10^(dB/20).
ComplexBaseband apply_emitter(const EmitterProfile &profile,
                              const ComplexBaseband &s);

/// The shipped four-radio population ("radio #1" .. "radio #4").
std::vector<EmitterProfile> reference_population();

/// Four copies of the identity profile with distinct ids.
std::vector<EmitterProfile> identical_population(std::size_t n = 4);

}  // namespace rfdna

#endif  // RFDNA_SIGNAL_MODEL_H_
