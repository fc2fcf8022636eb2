// rfdna/test_channel.cc

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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "rfdna/channel.h"

using namespace rfdna;

namespace {

std::vector<cd> random_signal(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<cd> v(n);
  for (auto &x : v) x = cd(standard_normal(rng), standard_normal(rng));
  return v;
}

// Asymptotic Kolmogorov distribution, with the usual small-sample correction.
double ks_p_value(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  double q = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    q += (k % 2 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(q, 0.0, 1.0);
}

double rayleigh_ks_statistic(std::vector<double> r, double sigma2) {
  std::sort(r.begin(), r.end());
  const double n = static_cast<double>(r.size());
  double d = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double f = 1.0 - std::exp(-r[i] * r[i] / sigma2);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

}  // namespace

TEST_SUITE("channel") {

TEST_CASE("tap variance closed form") {
  CHECK(tap_variance(0, 50e-9, 50e-9) == doctest::Approx(0.5 * (1.0 - std::exp(-1.0))).epsilon(1e-15));
  CHECK(tap_variance(0, 1.0, 1.0) == doctest::Approx(0.3161).epsilon(1e-4));
  const double ts = 50e-9, tr = 120e-9;
  for (std::size_t k = 0; k < 20; ++k)
    CHECK(tap_variance(k + 1, ts, tr) / tap_variance(k, ts, tr) ==
          doctest::Approx(std::exp(-ts / tr)).epsilon(1e-12));
  CHECK(tap_variance(5000, ts, tr) < 1e-300);
  CHECK_THROWS_AS(tap_variance(0, 0.0, tr), std::invalid_argument);
  CHECK_THROWS_AS(tap_variance(0, ts, -1.0), std::invalid_argument);
}

TEST_CASE("exponential profile is normalized") {
  const auto p = exponential_profile(4, 100.0);
  CHECK_NOTHROW(p.validate());
  double sum = 0.0;
  for (double v : p.variances) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.sample_delays() == std::vector<int>{0, 1, 2, 3});
  for (std::size_t k = 1; k < 4; ++k)
    CHECK(p.variances[k] / p.variances[k - 1] == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
}

TEST_CASE("shipped profiles") {
  for (const auto &name : shipped_profile_names()) {
    const auto p = shipped_profile(name);
    CHECK_NOTHROW(p.validate());
    double sum = 0.0;
    for (double v : p.variances) sum += v;
    CHECK(sum >= 0.999);
    CHECK(sum <= 1.001);
  }
  CHECK(shipped_profile("l2").sample_delays() == std::vector<int>{1, 4});
  CHECK(shipped_profile("l3").sample_delays() == std::vector<int>{1, 3, 5});
  CHECK(shipped_profile("l5").sample_delays() == std::vector<int>{1, 2, 3, 4, 5});
  CHECK_THROWS_AS(shipped_profile("l7"), std::invalid_argument);
}

TEST_CASE("profile validation") {
  ChannelProfile p;
  p.delays_ns = {50, 50};
  p.variances = {0.5, 0.5};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.delays_ns = {50, 75};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.delays_ns = {50, 100};
  p.variances = {0.5, 0.6};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.variances = {1.2, -0.2};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.variances = {0.5};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("draws land on the profile's sample grid") {
  Rng rng(1);
  ChannelProfile p;
  p.delays_ns = {50, 200};
  p.variances = {0.8, 0.2};
  const auto ch = draw_channel(p, rng);
  CHECK(ch.delays == std::vector<int>{1, 4});
  CHECK(ch.taps.size() == 2);
  CHECK(draw_channel(shipped_profile("l5"), rng).delays == std::vector<int>{1, 2, 3, 4, 5});
}

TEST_CASE("none profile is a unit tap and consumes no randomness") {
  Rng a(5), b(5);
  const auto ch = draw_channel(shipped_profile("none"), a);
  CHECK(ch.taps == std::vector<cd>{cd(1.0, 0.0)});
  CHECK(ch.delays == std::vector<int>{0});
  CHECK(a() == b());
}

TEST_CASE("empirical tap power follows the L=5 profile") {
  Rng rng(2024);
  const auto p = shipped_profile("l5");
  const std::size_t n = 100000;
  std::vector<double> acc(p.n_paths(), 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    const auto ch = draw_channel(p, rng);
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += std::norm(ch.taps[k]);
  }
  CHECK(acc[0] / n == doctest::Approx(0.865).epsilon(0.02));
  for (std::size_t k = 0; k < acc.size(); ++k)
    CHECK(acc[k] / n == doctest::Approx(p.variances[k]).epsilon(0.02));
}

TEST_CASE("tap magnitude is Rayleigh") {
  ChannelProfile p;
  p.delays_ns = {0};
  p.variances = {1.0};
  Rng rng(77);
  std::vector<double> r(100000);
  for (auto &v : r) v = std::abs(draw_channel(p, rng).taps[0]);
  const double d = rayleigh_ks_statistic(r, 1.0);
  CHECK(ks_p_value(d, r.size()) > 0.01);
  // The test must have power: a wrong scale is rejected.
  CHECK(ks_p_value(rayleigh_ks_statistic(r, 1.1), r.size()) < 0.01);
}

TEST_CASE("apply_channel small cases") {
  const ComplexBaseband s(random_signal(64, 4));
  ChannelRealization id{{cd(1.0, 0.0)}, {0}};
  CHECK(apply_channel(s, id).samples == s.samples);

  ChannelRealization d2{{cd(0.0, 0.5)}, {2}};
  const auto y = apply_channel(s, d2);
  REQUIRE(y.size() == 66);
  CHECK(y[0] == cd(0.0, 0.0));
  CHECK(y[1] == cd(0.0, 0.0));
  for (std::size_t m = 0; m < 64; ++m) CHECK(std::abs(y[m + 2] - cd(0.0, 0.5) * s[m]) < 1e-15);
}

TEST_CASE("apply_channel matches a direct sum") {
  const ComplexBaseband s(random_signal(64, 8));
  ChannelRealization ch{{cd(0.7, -0.2), cd(0.1, 0.3)}, {1, 4}};
  const auto y = apply_channel(s, ch);
  REQUIRE(y.size() == 68);
  double worst = 0.0;
  for (std::size_t m = 0; m < y.size(); ++m) {
    cd ref(0.0, 0.0);
    for (std::size_t k = 0; k < 2; ++k) {
      const long i = static_cast<long>(m) - ch.delays[k];
      if (i >= 0 && i < 64) ref += ch.taps[k] * s[static_cast<std::size_t>(i)];
    }
    worst = std::max(worst, std::abs(y[m] - ref));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("apply_channel is linear") {
  const auto x = random_signal(100, 1), yv = random_signal(100, 2);
  const cd a(0.3, -1.2), b(-0.7, 0.4);
  std::vector<cd> mix(100);
  for (std::size_t i = 0; i < 100; ++i) mix[i] = a * x[i] + b * yv[i];
  Rng rng(3);
  const auto ch = draw_channel(shipped_profile("l5"), rng);
  const auto lhs = apply_channel(ComplexBaseband(mix), ch);
  const auto cx = apply_channel(ComplexBaseband(x), ch);
  const auto cy = apply_channel(ComplexBaseband(yv), ch);
  for (std::size_t i = 0; i < lhs.size(); ++i)
    CHECK(std::abs(lhs[i] - (a * cx[i] + b * cy[i])) < 1e-12);
}

TEST_CASE("apply_channel errors") {
  ChannelRealization ch{{cd(1.0, 0.0)}, {4}};
  CHECK_THROWS_AS(apply_channel(ComplexBaseband{}, ch), std::invalid_argument);
  CHECK_THROWS_AS(apply_channel(ComplexBaseband(random_signal(4, 1)), ch), std::invalid_argument);
}

TEST_CASE("awgn calibration") {
  const ComplexBaseband s(std::vector<cd>(1000000, cd(1.0, 0.0)));
  for (double snr : {0.0, 20.0}) {
    Rng rng(static_cast<std::uint64_t>(snr) + 10);
    const auto out = add_awgn(s, snr, rng);
    double p = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) p += std::norm(out.signal[i] - s[i]);
    p /= static_cast<double>(s.size());
    const double expect = std::pow(10.0, -snr / 10.0);
    CHECK(out.noise_variance == doctest::Approx(expect).epsilon(1e-12));
    CHECK(p == doctest::Approx(expect).epsilon(snr == 0.0 ? 0.01 : 0.02));
  }
}

TEST_CASE("awgn reference power is taken over the occupied span") {
  std::vector<cd> v(100, cd(0.0, 0.0));
  for (std::size_t i = 20; i < 60; ++i) v[i] = cd(2.0, 0.0);
  CHECK(occupied_span(v) == std::make_pair<std::size_t, std::size_t>(20, 60));
  Rng rng(1);
  const auto out = add_awgn(ComplexBaseband(v), 10.0, rng);
  CHECK(out.signal_power == doctest::Approx(4.0));
  CHECK(out.noise_variance == doctest::Approx(0.4));
}

TEST_CASE("awgn edge cases and reproducibility") {
  const ComplexBaseband s(random_signal(256, 5));
  Rng rng(1);
  const auto clean = add_awgn(s, kNoiseless, rng);
  CHECK(clean.signal.samples == s.samples);
  CHECK(clean.noise_variance == 0.0);

  Rng a(99), b(99);
  CHECK(add_awgn(s, 3.0, a).signal.samples == add_awgn(s, 3.0, b).signal.samples);

  CHECK_THROWS_AS(add_awgn(ComplexBaseband(std::vector<cd>(8)), 3.0, rng), std::invalid_argument);
}

TEST_CASE("profile text round trip") {
  const auto p = parse_channel_profile("L=2; delays_ns=50,200; variances=0.8,0.2");
  CHECK(p.n_paths() == 2);
  CHECK(p.sample_delays() == std::vector<int>{1, 4});
  CHECK(p.variances == std::vector<double>{0.8, 0.2});
  const auto q = parse_channel_profile(format_channel_profile(shipped_profile("l5")));
  CHECK(q.delays_ns == shipped_profile("l5").delays_ns);
  CHECK(q.variances == shipped_profile("l5").variances);
  CHECK_THROWS(parse_channel_profile("L=3; delays_ns=50,200; variances=0.8,0.2"));
  CHECK_THROWS(parse_channel_profile("delays_ns=50; variances=1; bogus=2"));
}

TEST_CASE("realization csv") {
  std::ostringstream os;
  write_realization_csv(os, ChannelRealization{{cd(0.5, -0.25), cd(0.0, 1.0)}, {1, 4}});
  const auto text = os.str();
  CHECK(text.rfind("tap_index", 0) == 0);
  CHECK(text.find("0,1,0.5,-0.25") != std::string::npos);
  CHECK(text.find("1,4,0,1") != std::string::npos);
}

}  // TEST_SUITE
