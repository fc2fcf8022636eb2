// rfdna/baseband.h

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

#ifndef RFDNA_BASEBAND_H_
#define RFDNA_BASEBAND_H_

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rfdna {

using cd = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// 802.11a baseband rate; the only rate the synthesis path supports.
inline constexpr double kSampleRate = 20e6;

/// Thrown when a computation meets a NaN/Inf input or intermediate value.
class NonFiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Complex baseband waveform at a known sample rate.
struct ComplexBaseband {
  std::vector<cd> samples;
  double sample_rate = kSampleRate;

  ComplexBaseband() = default;
  ComplexBaseband(std::vector<cd> s, double rate = kSampleRate)
      : samples(std::move(s)), sample_rate(rate) {}

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  const cd &operator[](std::size_t i) const { return samples[i]; }
  cd &operator[](std::size_t i) { return samples[i]; }

  /// Throws std::invalid_argument unless rate > 0, length > 0 and every
  /// sample is finite.
  void validate(const char *what = "signal") const;
};

bool all_finite(const std::vector<cd> &v);

/// Mean of |s(m)|^2 over all samples; 0 for an empty vector.
double mean_power(const std::vector<cd> &v);

}  // namespace rfdna

#endif  // RFDNA_BASEBAND_H_
