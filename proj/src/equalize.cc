// rfdna/equalize.cc

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

#include "rfdna/equalize.h"

#include <algorithm>
#include <cmath>

#include "rfdna/fft.h"

namespace rfdna {

std::string to_string(EqualizerKind k) { return k == EqualizerKind::kZf ? "ZF" : "MMSE"; }

EqualizerKind parse_equalizer(const std::string &s) {
  if (s == "zf" || s == "ZF") return EqualizerKind::kZf;
  if (s == "mmse" || s == "MMSE") return EqualizerKind::kMmse;
  throw std::invalid_argument("unknown equalizer '" + s + "'");
}

std::vector<cd> estimate_response(const ChannelEstimate &h, std::size_t n_fft) {
  h.validate();
  std::vector<cd> taps(n_fft, cd(0.0, 0.0));
  for (std::size_t k = 0; k < h.taps.size(); ++k) {
    if (h.delays[k] < 0 || static_cast<std::size_t>(h.delays[k]) >= n_fft)
      throw std::invalid_argument("equalize: tap delay outside the DFT");
    taps[static_cast<std::size_t>(h.delays[k])] += h.taps[k];
  }
  dft_inplace(taps);
  return taps;
}

namespace {

struct Prepared {
  std::vector<cd> spectrum;
  std::vector<cd> response;
  std::size_t out_len;
};

Prepared prepare(const ComplexBaseband &r, const ChannelEstimate &h, std::size_t n_fft,
                 std::size_t out_len) {
  r.validate("equalizer input");
  if (n_fft < r.size()) throw std::invalid_argument("equalize: n_fft below signal length");
  Prepared p;
  p.response = estimate_response(h, n_fft);
  p.spectrum.assign(n_fft, cd(0.0, 0.0));
  std::copy(r.samples.begin(), r.samples.end(), p.spectrum.begin());
  dft_inplace(p.spectrum);
  if (out_len == 0) {
    const std::size_t max_delay =
        h.delays.empty() ? 0 : static_cast<std::size_t>(*std::max_element(h.delays.begin(), h.delays.end()));
    out_len = r.size() > max_delay ? r.size() - max_delay : r.size();
  }
  p.out_len = std::min(out_len, n_fft);
  return p;
}

ComplexBaseband finish(Prepared &p, double rate) {
  idft_inplace(p.spectrum);
  p.spectrum.resize(p.out_len);
  return ComplexBaseband(std::move(p.spectrum), rate);
}

}  // namespace

ComplexBaseband zf_equalize(const ComplexBaseband &r, const ChannelEstimate &h,
                            std::size_t n_fft, std::size_t out_len) {
  Prepared p = prepare(r, h, n_fft, out_len);
  for (std::size_t k = 0; k < n_fft; ++k) {
    if (std::abs(p.response[k]) < kSpectralNullFloor)
      throw SpectralNullError("zf_equalize: spectral null at bin " + std::to_string(k), k);
    p.spectrum[k] /= p.response[k];
  }
  return finish(p, r.sample_rate);
}

ComplexBaseband mmse_equalize(const ComplexBaseband &r, const ChannelEstimate &h,
                              double snr_db, std::size_t n_fft, std::size_t out_len) {
  if (!std::isfinite(snr_db)) throw std::invalid_argument("mmse_equalize: SNR must be finite");
  Prepared p = prepare(r, h, n_fft, out_len);
  const double inv_gamma = std::pow(10.0, -snr_db / 10.0);
  for (std::size_t k = 0; k < n_fft; ++k) {
    const cd H = p.response[k];
    p.spectrum[k] = std::conj(H) * p.spectrum[k] / (std::norm(H) + inv_gamma);
  }
  return finish(p, r.sample_rate);
}

}  // namespace rfdna
