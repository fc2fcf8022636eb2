// rfdna/equalize.h

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

#ifndef RFDNA_EQUALIZE_H_
#define RFDNA_EQUALIZE_H_

#include <stdexcept>
#include <string>

#include "rfdna/baseband.h"
#include "rfdna/chanest.h"

namespace rfdna {

enum class EqualizerKind { kZf, kMmse };

std::string to_string(EqualizerKind k);
EqualizerKind parse_equalizer(const std::string &s);

inline constexpr std::size_t kEqualizerFftSize = 512;  // N_K

/// Raised by zf_equalize when |H(k)| falls below the floor on some bin.
class SpectralNullError : public std::runtime_error {
 public:
  SpectralNullError(const std::string &msg, std::size_t bin)
      : std::runtime_error(msg), bin_(bin) {}
  std::size_t bin() const { return bin_; }

 private:
  std::size_t bin_;
};

inline constexpr double kSpectralNullFloor = 1e-8;

/// Frequency response of the estimate on n_fft bins.
std::vector<cd> estimate_response(const ChannelEstimate &h, std::size_t n_fft);

// Both equalizers zero-pad r to n_fft, divide per bin, transform back and keep
// the first `out_len` samples. out_len = 0 keeps len(r) - max delay.

ComplexBaseband zf_equalize(const ComplexBaseband &r, const ChannelEstimate &h,
                            std::size_t n_fft = kEqualizerFftSize, std::size_t out_len = 0);

/// X(k) = H*(k) R(k) / (|H(k)|^2 + 1/gamma), gamma = 10^(snr_db/10).
ComplexBaseband mmse_equalize(const ComplexBaseband &r, const ChannelEstimate &h,
                              double snr_db, std::size_t n_fft = kEqualizerFftSize,
                              std::size_t out_len = 0);

}  // namespace rfdna

#endif  // RFDNA_EQUALIZE_H_
