// rfdna/signal_model.cc

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

#include "rfdna/signal_model.h"

#include <array>
#include <cmath>

#include "rfdna/fft.h"

namespace rfdna {

namespace {

// Subcarriers -26..26 of the short and long training symbols.
constexpr std::array<int, 53> kShortPattern = {
    0, 0, 1, 0, 0, 0, -1, 0, 0, 0, 1, 0, 0, 0, -1, 0, 0, 0,
    -1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, -1, 0, 0, 0, -1, 0,
    0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0};

constexpr std::array<int, 53> kLongPattern = {
    1, 1, -1, -1, 1, 1, -1, 1, -1, 1, 1, 1, 1, 1, 1, -1, -1, 1,
    1, -1, 1, -1, 1, 1, 1, 1, 0, 1, -1, -1, 1, 1, -1, 1, -1, 1,
    -1, -1, -1, -1, -1, 1, 1, -1, -1, 1, -1, 1, -1, 1, 1, 1, 1};

std::vector<cd> to_fft_order(const std::array<int, 53> &pattern, cd unit) {
  std::vector<cd> bins(kNumSubcarriers, cd(0.0, 0.0));
  for (int i = 0; i < 53; ++i) {
    const int k = i - 26;
    const std::size_t bin = static_cast<std::size_t>((k + 64) % 64);
    bins[bin] = static_cast<double>(pattern[i]) * unit;
  }
  return bins;
}

}  // namespace

std::vector<cd> lts_frequency_reference() {
  return to_fft_order(kLongPattern, cd(1.0, 0.0));
}

std::vector<cd> sts_frequency_reference() {
  const double s = std::sqrt(13.0 / 6.0);
  return to_fft_order(kShortPattern, cd(s, s));
}

ComplexBaseband generate_preamble(double sample_rate) {
  if (sample_rate != kSampleRate)
    throw std::invalid_argument("generate_preamble: only 20 MS/s is supported");

  const std::vector<cd> sts64 = idft(sts_frequency_reference());
  const std::vector<cd> lts64 = idft(lts_frequency_reference());

  // The 64-point STS is 16-periodic; one period is tiled so repeats are exact.
  std::vector<cd> out;
  out.reserve(kPreambleLength);
  for (std::size_t rep = 0; rep < kNumSts; ++rep)
    out.insert(out.end(), sts64.begin(), sts64.begin() + kStsLength);
  out.insert(out.end(), lts64.end() - kLtsGuardLength, lts64.end());
  out.insert(out.end(), lts64.begin(), lts64.end());
  out.insert(out.end(), lts64.begin(), lts64.end());
  return ComplexBaseband(std::move(out), sample_rate);
}

void EmitterProfile::validate(double sample_rate) const {
  auto finite = [](cd v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); };
  if (!std::isfinite(iq_gain_imbalance_db) || !std::isfinite(iq_phase_imbalance_deg) ||
      !finite(a1) || !finite(a3) || !finite(a5) || !std::isfinite(residual_cfo_hz) ||
      !finite(dc_offset))
    throw std::invalid_argument("emitter '" + id + "': non-finite field");
  if (std::abs(a1) == 0.0)
    throw std::invalid_argument("emitter '" + id + "': |a1| must be > 0");
  if (std::abs(residual_cfo_hz) > sample_rate / 100.0)
    throw std::invalid_argument("emitter '" + id + "': residual CFO out of range");
}

bool EmitterProfile::is_identity() const {
  return iq_gain_imbalance_db == 0.0 && iq_phase_imbalance_deg == 0.0 &&
         a1 == cd(1.0, 0.0) && a3 == cd(0.0, 0.0) && a5 == cd(0.0, 0.0) &&
         residual_cfo_hz == 0.0 && dc_offset == cd(0.0, 0.0);
}

ComplexBaseband apply_emitter(const EmitterProfile &profile, const ComplexBaseband &s) {
  if (s.empty()) throw std::invalid_argument("apply_emitter: empty signal");
  profile.validate(s.sample_rate);

  ComplexBaseband out = s;
  auto &x = out.samples;

  // Each stage is skipped when it is the identity so the identity profile
  // leaves the samples untouched bit for bit.
  if (profile.iq_gain_imbalance_db != 0.0 || profile.iq_phase_imbalance_deg != 0.0) {
    const double g = std::pow(10.0, profile.iq_gain_imbalance_db / 20.0);
    const double phi = profile.iq_phase_imbalance_deg * kPi / 180.0;
    const double c = std::cos(phi), sn = std::sin(phi);
    for (auto &v : x) v = cd(v.real(), g * (v.imag() * c - v.real() * sn));
  }

  if (profile.a1 != cd(1.0, 0.0) || profile.a3 != cd(0.0, 0.0) ||
      profile.a5 != cd(0.0, 0.0)) {
    for (auto &v : x) {
      const double p = std::norm(v);
      v = profile.a1 * v + profile.a3 * v * p + profile.a5 * v * (p * p);
    }
  }

  if (profile.residual_cfo_hz != 0.0) {
    const double w = 2.0 * kPi * profile.residual_cfo_hz / s.sample_rate;
    for (std::size_t m = 0; m < x.size(); ++m)
      x[m] *= std::polar(1.0, w * static_cast<double>(m));
  }

  if (profile.dc_offset != cd(0.0, 0.0))
    for (auto &v : x) v += profile.dc_offset;

  return out;
}

std::vector<EmitterProfile> reference_population() {
  // Severities are relative to the preamble's standard amplitude
  // (mean power 52/4096, peak |u| ~ 0.16).
  std::vector<EmitterProfile> radios(4);

  radios[0].id = "radio1";
  radios[0].iq_gain_imbalance_db = 0.7;
  radios[0].iq_phase_imbalance_deg = 3.0;
  radios[0].a1 = std::polar(1.12, 4.0 * kPi / 180.0);
  radios[0].a3 = cd(-2.4, 0.0);
  radios[0].residual_cfo_hz = 2400.0;
  radios[0].dc_offset = cd(0.004, 0.0);

  radios[1].id = "radio2";
  radios[1].iq_gain_imbalance_db = -0.8;
  radios[1].iq_phase_imbalance_deg = -4.0;
  radios[1].a1 = std::polar(1.06, -8.0 * kPi / 180.0);
  radios[1].a3 = cd(-1.2, 0.6);
  radios[1].residual_cfo_hz = -1600.0;
  radios[1].dc_offset = cd(0.0, -0.003);

  radios[2].id = "radio3";
  radios[2].iq_gain_imbalance_db = 0.3;
  radios[2].iq_phase_imbalance_deg = 6.0;
  radios[2].a1 = std::polar(1.16, 2.0 * kPi / 180.0);
  radios[2].a3 = cd(-4.0, 0.0);
  radios[2].a5 = cd(16.0, 0.0);
  radios[2].residual_cfo_hz = 800.0;
  radios[2].dc_offset = cd(0.002, 0.002);

  radios[3].id = "radio4";
  radios[3].iq_gain_imbalance_db = -0.4;
  radios[3].iq_phase_imbalance_deg = -2.0;
  radios[3].a1 = std::polar(1.08, -3.0 * kPi / 180.0);
  radios[3].a3 = cd(-1.8, 0.0);
  radios[3].residual_cfo_hz = -3600.0;

  return radios;
}

std::vector<EmitterProfile> identical_population(std::size_t n) {
  std::vector<EmitterProfile> radios(n);
  for (std::size_t i = 0; i < n; ++i) radios[i].id = "radio" + std::to_string(i + 1);
  return radios;
}

}  // namespace rfdna
