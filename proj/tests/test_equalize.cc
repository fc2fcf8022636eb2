// rfdna/test_equalize.cc

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

#include <cmath>

#include "doctest.h"
#include "rfdna/equalize.h"
#include "rfdna/signal_model.h"

using namespace rfdna;

namespace {

ChannelEstimate estimate_of(std::vector<cd> taps, std::vector<int> delays) {
  ChannelEstimate e;
  e.taps = std::move(taps);
  e.delays = std::move(delays);
  return e;
}

ChannelEstimate estimate_of(const ChannelRealization &ch) { return estimate_of(ch.taps, ch.delays); }

double max_diff(const ComplexBaseband &a, const std::vector<cd> &b) {
  double w = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) w = std::max(w, std::abs(a[i] - b[i]));
  return w;
}

std::vector<cd> random_signal(std::size_t n, Rng &rng) {
  std::vector<cd> v(n);
  for (auto &x : v) x = cd(standard_normal(rng), standard_normal(rng));
  return v;
}

}  // namespace

TEST_SUITE("equalize") {

TEST_CASE("identity estimate") {
  const auto p = generate_preamble();
  const auto id = estimate_of({cd(1.0, 0.0)}, {0});
  CHECK(max_diff(zf_equalize(p, id), p.samples) < 1e-9);
  CHECK(zf_equalize(p, id).size() == 320);
}

TEST_CASE("ZF inverts the true channel on noiseless data") {
  Rng rng(6);
  const auto p = apply_emitter(reference_population()[3], generate_preamble());
  for (const auto &name : {"l2", "l3", "l5"}) {
    for (int t = 0; t < 10; ++t) {
      const auto ch = draw_channel(shipped_profile(name), rng);
      const auto r = apply_channel(p, ch);
      const auto x = zf_equalize(r, estimate_of(ch));
      REQUIRE(x.size() == 320);
      CHECK(max_diff(x, p.samples) < 1e-9);
    }
  }
}

TEST_CASE("doubling the estimate halves the output") {
  Rng rng(7);
  const auto r = ComplexBaseband(random_signal(300, rng));
  const auto h = estimate_of({cd(0.8, 0.1), cd(-0.2, 0.3)}, {1, 4});
  const auto h2 = estimate_of({cd(1.6, 0.2), cd(-0.4, 0.6)}, {1, 4});
  const auto a = zf_equalize(r, h), b = zf_equalize(r, h2);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(b[i] - 0.5 * a[i]) < 1e-12);
}

TEST_CASE("MMSE approaches ZF as the SNR grows") {
  Rng rng(8);
  const auto r = ComplexBaseband(random_signal(324, rng));
  const auto h = estimate_of({cd(0.8, 0.1), cd(-0.2, 0.3)}, {1, 4});
  const auto zf = zf_equalize(r, h);
  const auto mm = mmse_equalize(r, h, 120.0);  // gamma = 1e12
  CHECK(max_diff(mm, zf.samples) < 1e-6);
}

TEST_CASE("MMSE Wiener gain on the identity channel") {
  Rng rng(9);
  const auto r = ComplexBaseband(random_signal(200, rng));
  const auto out = mmse_equalize(r, estimate_of({cd(1.0, 0.0)}, {0}), 0.0);
  for (std::size_t i = 0; i < r.size(); ++i) CHECK(std::abs(out[i] - 0.5 * r[i]) < 1e-12);
}

TEST_CASE("spectral null") {
  // 1 + z^-1 vanishes at the Nyquist bin of the 512-point DFT.
  const auto h = estimate_of({cd(1.0, 0.0), cd(1.0, 0.0)}, {0, 1});
  Rng rng(10);
  const auto r = ComplexBaseband(random_signal(321, rng));
  try {
    zf_equalize(r, h);
    FAIL("expected SpectralNullError");
  } catch (const SpectralNullError &e) {
    CHECK(e.bin() == 256);
  }
  const auto out = mmse_equalize(r, h, 20.0);
  CHECK(all_finite(out.samples));

  // The null bin is driven to zero rather than amplified.
  std::vector<cd> alt(321);
  for (std::size_t m = 0; m < alt.size(); ++m) alt[m] = (m % 2 ? -1.0 : 1.0) * cd(1.0, 0.0);
  const auto nyq = estimate_response(h, 512);
  CHECK(std::abs(nyq[256]) < kSpectralNullFloor);
  const auto y = mmse_equalize(ComplexBaseband(alt), h, 20.0, 512, 321);
  CHECK(mean_power(y.samples) < mean_power(alt));
}

TEST_CASE("both equalizers are linear in r") {
  Rng rng(11);
  const auto x = random_signal(320, rng), y = random_signal(320, rng);
  const cd a(0.4, -1.1), b(-2.0, 0.3);
  std::vector<cd> mix(320);
  for (std::size_t i = 0; i < 320; ++i) mix[i] = a * x[i] + b * y[i];
  const auto h = estimate_of({cd(0.9, 0.2), cd(0.1, -0.3), cd(0.05, 0.05)}, {1, 3, 5});
  for (int kind = 0; kind < 2; ++kind) {
    auto eq = [&](const std::vector<cd> &s) {
      return kind ? mmse_equalize(ComplexBaseband(s), h, 9.0) : zf_equalize(ComplexBaseband(s), h);
    };
    const auto lhs = eq(mix), ex = eq(x), ey = eq(y);
    for (std::size_t i = 0; i < lhs.size(); ++i)
      CHECK(std::abs(lhs[i] - (a * ex[i] + b * ey[i])) < 1e-10);
  }
}

TEST_CASE("MMSE reconstructs no worse than ZF at 9 dB with the true channel") {
  Rng rng(12);
  const auto p = generate_preamble();
  const auto prof = shipped_profile("l2");
  double e_zf = 0.0, e_mm = 0.0;
  for (int t = 0; t < 500; ++t) {
    const auto ch = draw_channel(prof, rng);
    const auto noisy = add_awgn(apply_channel(p, ch), 9.0, rng);
    const auto zf = zf_equalize(noisy.signal, estimate_of(ch), 512, 320);
    const auto mm = mmse_equalize(noisy.signal, estimate_of(ch), 9.0, 512, 320);
    for (std::size_t i = 0; i < 320; ++i) {
      e_zf += std::norm(zf[i] - p[i]);
      e_mm += std::norm(mm[i] - p[i]);
    }
  }
  MESSAGE("reconstruction MSE ZF " << e_zf / 160000 << ", MMSE " << e_mm / 160000);
  CHECK(e_mm <= e_zf);
}

TEST_CASE("errors and parsing") {
  const auto p = generate_preamble();
  const auto id = estimate_of({cd(1.0, 0.0)}, {0});
  CHECK_THROWS_AS(zf_equalize(p, id, 256), std::invalid_argument);
  CHECK_THROWS_AS(mmse_equalize(p, id, INFINITY), std::invalid_argument);
  CHECK_THROWS_AS(zf_equalize(p, estimate_of({cd(1.0, 0.0)}, {600})), std::invalid_argument);
  CHECK(parse_equalizer("zf") == EqualizerKind::kZf);
  CHECK(parse_equalizer("mmse") == EqualizerKind::kMmse);
  CHECK_THROWS_AS(parse_equalizer("dfe"), std::invalid_argument);
}

}  // TEST_SUITE
