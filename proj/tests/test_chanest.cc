// rfdna/test_chanest.cc

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
#include <sstream>

#include "doctest.h"
#include "rfdna/chanest.h"
#include "rfdna/fft.h"
#include "rfdna/signal_model.h"

using namespace rfdna;

namespace {

// Preamble through a channel with `lead` zeros in front and a short tail.
ComplexBaseband received(const ComplexBaseband &tx, const ChannelRealization &ch,
                         std::size_t lead) {
  std::vector<cd> v(lead, cd(0.0, 0.0));
  v.insert(v.end(), tx.samples.begin(), tx.samples.end());
  v.resize(v.size() + 16, cd(0.0, 0.0));
  return apply_channel(ComplexBaseband(std::move(v)), ch);
}

std::span<const cd> lts1(const ComplexBaseband &r, std::size_t origin) {
  return std::span<const cd>(r.samples).subspan(origin + kLts1Start, kLtsLength);
}
std::span<const cd> lts2(const ComplexBaseband &r, std::size_t origin) {
  return std::span<const cd>(r.samples).subspan(origin + kLts2Start, kLtsLength);
}

void add_noise(ComplexBaseband &r, double sigma2, Rng &rng) {
  const double s = std::sqrt(sigma2 / 2.0);
  for (auto &v : r.samples) v += cd(s * standard_normal(rng), s * standard_normal(rng));
}

double tap_error(const std::vector<cd> &a, const std::vector<cd> &b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

}  // namespace

TEST_SUITE("chanest") {

TEST_CASE("LS on the identity channel") {
  const auto p = generate_preamble();
  const auto X = lts_frequency_reference();
  const auto est = ls_estimate(lts1(p, 0), lts2(p, 0), X);
  REQUIRE(est.freq_response.size() == 64);
  int occupied = 0;
  for (std::size_t k = 0; k < 64; ++k) {
    if (X[k] == cd(0.0, 0.0)) continue;
    ++occupied;
    CHECK(std::abs(est.freq_response[k] - cd(1.0, 0.0)) < 1e-9);
  }
  CHECK(occupied == 52);
  CHECK(est.taps.size() == 64);
  CHECK(est.method == EstimatorKind::kLs);
}

TEST_CASE("LS recovers a two-path channel exactly") {
  const ChannelRealization ch{{cd(0.9, 0.0), cd(0.0, 0.4)}, {1, 4}};
  const auto r = received(generate_preamble(), ch, 0);
  const auto est = ls_estimate(lts1(r, 0), lts2(r, 0), lts_frequency_reference(), {1, 4});
  REQUIRE(est.taps.size() == 2);
  CHECK(tap_error(est.taps, ch.taps) < 1e-9);
  CHECK(est.delays == std::vector<int>{1, 4});
  CHECK(est.residual_power < 1e-20);
  CHECK(squared_error(ch, est) < 1e-18);
}

TEST_CASE("LS is exact for every shipped profile") {
  Rng rng(42);
  for (const auto &name : {"l2", "l3", "l5"}) {
    const auto prof = shipped_profile(name);
    for (int t = 0; t < 20; ++t) {
      const auto ch = draw_channel(prof, rng);
      const auto tx = apply_emitter(reference_population()[t % 4], generate_preamble());
      const auto r = received(tx, ch, 7);
      // The LTS reference is the standard one; an impaired emitter would
      // bias it, so exactness is checked on the clean preamble.
      const auto rc = received(generate_preamble(), ch, 7);
      const auto est = ls_estimate(lts1(rc, 7), lts2(rc, 7), lts_frequency_reference(),
                                   prof.sample_delays());
      CHECK(tap_error(est.taps, ch.taps) < 1e-9);
      CHECK(r.size() == rc.size());
    }
  }
}

TEST_CASE("two LTS halve the per-bin error variance") {
  const auto p = generate_preamble();
  const auto X = lts_frequency_reference();
  Rng rng(9);
  double e1 = 0.0, e2 = 0.0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    ComplexBaseband r = p;
    add_noise(r, 1e-3, rng);
    const auto two = ls_estimate(lts1(r, 0), lts2(r, 0), X);
    const auto one = ls_estimate_single(lts1(r, 0), X);
    for (std::size_t k = 0; k < 64; ++k) {
      if (X[k] == cd(0.0, 0.0)) continue;
      e2 += std::norm(two.freq_response[k] - cd(1.0, 0.0));
      e1 += std::norm(one.freq_response[k] - cd(1.0, 0.0));
    }
  }
  MESSAGE("variance ratio " << e2 / e1);
  CHECK(e2 / e1 == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("LS errors") {
  const auto X = lts_frequency_reference();
  const std::vector<cd> y(64, cd(1.0, 0.0)), zero(64), short_y(63, cd(1.0, 0.0));
  CHECK_THROWS_AS(ls_estimate(y, short_y, X), std::invalid_argument);
  CHECK_THROWS_AS(ls_estimate(zero, y, X), std::invalid_argument);
  CHECK_THROWS_AS(ls_estimate(y, y, X, {64}), std::invalid_argument);
  CHECK_THROWS_AS(ls_estimate_single(zero, X), std::invalid_argument);
}

TEST_CASE("LMMSE limits") {
  const auto prof = shipped_profile("l2");
  const auto X = lts_frequency_reference();
  Rng rng(3);
  const auto ch = draw_channel(prof, rng);
  auto r = received(generate_preamble(), ch, 0);
  add_noise(r, 1e-3, rng);
  const auto ls = ls_estimate(lts1(r, 0), lts2(r, 0), X, prof.sample_delays());

  const auto same = lmmse_estimate(ls, prof, 0.0, X);
  CHECK(same.method == EstimatorKind::kLmmse);
  CHECK(tap_error(same.taps, ls.taps) < 1e-9);

  const auto heavy = lmmse_estimate(ls, prof, 1e6, X);
  for (std::size_t k = 0; k < ls.taps.size(); ++k) CHECK(std::abs(heavy.taps[k]) < std::abs(ls.taps[k]));
  CHECK(heavy.noise_variance_used == 1e6);
}

TEST_CASE("LMMSE tap magnitudes do not grow with the noise variance") {
  const auto X = lts_frequency_reference();
  Rng rng(21);
  for (const auto &name : {"l2", "l3", "l5"}) {
    const auto prof = shipped_profile(name);
    for (int t = 0; t < 20; ++t) {
      const auto ch = draw_channel(prof, rng);
      auto r = received(generate_preamble(), ch, 0);
      add_noise(r, 1e-3, rng);
      const auto ls = ls_estimate(lts1(r, 0), lts2(r, 0), X, prof.sample_delays());
      std::vector<double> prev(ls.taps.size());
      for (std::size_t k = 0; k < prev.size(); ++k) prev[k] = std::abs(ls.taps[k]);
      for (double s2 = 1e-6; s2 < 1e3; s2 *= 1.5) {
        const auto m = lmmse_estimate(ls, prof, s2, X);
        for (std::size_t k = 0; k < prev.size(); ++k) {
          CHECK(std::abs(m.taps[k]) <= prev[k] + 1e-12);
          prev[k] = std::abs(m.taps[k]);
        }
      }
    }
  }
}

TEST_CASE("LMMSE beats LS at 0 dB on the two-path profile") {
  const auto prof = shipped_profile("l2");
  const auto X = lts_frequency_reference();
  const auto p = generate_preamble();
  const double ps = mean_power(p.samples);
  Rng rng(5);
  double e_ls = 0.0, e_mm = 0.0;
  for (int t = 0; t < 10000; ++t) {
    const auto ch = draw_channel(prof, rng);
    auto r = received(p, ch, 0);
    add_noise(r, ps, rng);
    const auto ls = ls_estimate(lts1(r, 0), lts2(r, 0), X, prof.sample_delays());
    e_ls += squared_error(ch, ls);
    e_mm += squared_error(ch, lmmse_estimate(ls, prof, ps, X));
  }
  MESSAGE("mean error LS " << e_ls / 1e4 << ", LMMSE " << e_mm / 1e4);
  CHECK(e_mm < e_ls);
}

TEST_CASE("LMMSE errors") {
  const auto prof = shipped_profile("l2");
  const auto X = lts_frequency_reference();
  const auto p = generate_preamble();
  const auto ls = ls_estimate(lts1(p, 0), lts2(p, 0), X, {1, 4});
  CHECK_THROWS_AS(lmmse_estimate(ls, prof, -1.0, X), std::invalid_argument);
  CHECK_THROWS_AS(lmmse_estimate(ls, shipped_profile("l3"), 0.1, X), std::invalid_argument);
  ChannelProfile dead = prof;
  dead.variances = {1.0, 0.0};
  CHECK_THROWS_AS(lmmse_estimate(ls, dead, 0.0, X), std::domain_error);
}

TEST_CASE("NM costs on the identity channel") {
  const auto p = generate_preamble();
  const auto c = build_nm_costs(p, p, {0});
  const std::vector<double> v = {1.0, 0.0};
  CHECK(std::abs(c.c1(v)) < 1e-12);
  CHECK(std::abs(c.c2(v)) < 1e-12);
  CHECK(c.span_begin == 0);
  CHECK(c.span_end == 320);
  CHECK(c.c1.dim() == 2);
}

TEST_CASE("NM cost minimum under real scaling") {
  const auto p = generate_preamble();
  ComplexBaseband r = p;
  for (auto &v : r.samples) v *= 2.0;
  const auto c = build_nm_costs(r, p, {0});
  const Eigen::VectorXd v = c.c1.G.ldlt().solve(c.c1.g);
  CHECK(v(0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(v(1)) < 1e-12);
  NmConfig cfg;
  cfg.eps1 = cfg.eps2 = 1e-20;
  const auto res = nelder_mead_minimize([&](std::span<const double> x) { return c.c1(x); },
                                        {0.0, 0.0}, cfg);
  CHECK(res.x[0] == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("NM costs match a per-sample residual loop") {
  Rng rng(17);
  std::vector<cd> xs(320);
  for (auto &v : xs) v = cd(standard_normal(rng), standard_normal(rng));
  const ComplexBaseband x(xs);
  const ChannelRealization ch{{cd(0.8, -0.3), cd(-0.2, 0.45)}, {3, 6}};
  std::vector<cd> rv(330, cd(0.0, 0.0));
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t m = 0; m < 320; ++m) rv[m + ch.delays[k]] += ch.taps[k] * xs[m];
  for (auto &v : rv) v += cd(0.01 * standard_normal(rng), 0.01 * standard_normal(rng));
  const ComplexBaseband r(rv);

  const std::vector<double> h = {0.8, -0.3, -0.2, 0.45};
  const auto c = build_nm_costs(r, x, ch.delays);
  double c1 = 0.0, c2 = 0.0;
  for (std::size_t m = 3; m < 326; ++m) {
    double re = r[m].real(), im = r[m].imag();
    for (std::size_t k = 0; k < 2; ++k) {
      const long i = static_cast<long>(m) - ch.delays[k];
      if (i < 0 || i >= 320) continue;
      const cd xv = xs[static_cast<std::size_t>(i)];
      re -= h[2 * k] * xv.real() - h[2 * k + 1] * xv.imag();
      im -= h[2 * k] * xv.imag() + h[2 * k + 1] * xv.real();
    }
    c1 += re * re;
    c2 += im * im;
  }
  CHECK(c.span_begin == 3);
  CHECK(c.span_end == 326);
  CHECK(std::abs(c.c1(h) - c1) < 1e-10);
  CHECK(std::abs(c.c2(h) - c2) < 1e-10);
  CHECK_THROWS_AS(build_nm_costs(r, x, {3, 330}), std::invalid_argument);
  CHECK_THROWS_AS(build_nm_costs(r, x, {}), std::invalid_argument);
}

TEST_CASE("NM with the exact candidate recovers a noiseless two-path channel") {
  const auto tx = apply_emitter(reference_population()[1], generate_preamble());
  const ChannelRealization ch{{cd(0.9, 0.0), cd(0.0, 0.4)}, {1, 4}};
  const std::size_t lead = 20;
  const auto r = received(tx, ch, lead);
  const auto est = nm_estimate(r, {tx}, lead, {1, 4});
  CHECK(est.method == EstimatorKind::kNm);
  CHECK(tap_error(est.taps, ch.taps) < 1e-3);
  CHECK(est.residual_power < 1e-4);
  CHECK(est.candidate_index == 0);
}

TEST_CASE("NM recovers every shipped profile from the exact candidate") {
  Rng rng(8);
  const auto pop = reference_population();
  for (const auto &name : {"l2", "l3", "l5"}) {
    const auto prof = shipped_profile(name);
    for (int t = 0; t < 10; ++t) {
      const auto ch = draw_channel(prof, rng);
      const auto tx = apply_emitter(pop[t % 4], generate_preamble());
      const auto r = received(tx, ch, 10);
      const auto ls = ls_estimate(lts1(r, 10), lts2(r, 10), lts_frequency_reference(),
                                  prof.sample_delays());
      const auto est = nm_estimate(r, {tx}, 10, prof.sample_delays(), {}, ls.taps);
      CHECK(squared_error(ch, est) <= 1e-3);
    }
  }
}

TEST_CASE("NM picks the matching candidate and breaks ties by index") {
  const auto pop = reference_population();
  std::vector<ComplexBaseband> cands;
  for (const auto &e : pop) cands.push_back(apply_emitter(e, generate_preamble()));
  const ChannelRealization ch{{cd(0.7, 0.2), cd(0.1, -0.3)}, {1, 4}};
  const auto r = received(cands[2], ch, 5);
  CHECK(nm_estimate(r, cands, 5, {1, 4}).candidate_index == 2);

  const auto one = nm_estimate(r, {cands[2]}, 5, {1, 4});
  const auto dup = nm_estimate(r, {cands[2], cands[2]}, 5, {1, 4});
  CHECK(dup.candidate_index == 0);
  CHECK(dup.taps == one.taps);
  CHECK(dup.residual_power == one.residual_power);
}

TEST_CASE("NM errors") {
  const auto p = generate_preamble();
  CHECK_THROWS_AS(nm_estimate(p, {}, 0, {0}), std::invalid_argument);
  CHECK_THROWS_AS(nm_estimate(p, {p}, 0, {}), std::invalid_argument);
  CHECK_THROWS_AS(nm_estimate(p, {p}, 0, {0}, {}, std::vector<cd>{cd(1.0, 0.0), cd(0.0, 0.0)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(nm_estimate(p, {p, ComplexBaseband({cd(1.0, 0.0)})}, 0, {0}),
                  std::invalid_argument);
}

TEST_CASE("squared error") {
  const ChannelRealization t1{{cd(1.0, 0.0)}, {0}};
  ChannelEstimate e;
  e.taps = {cd(0.0, 0.0)};
  e.delays = {0};
  CHECK(squared_error(t1, e) == 1.0);
  e.taps = {cd(1.0, 0.0)};
  CHECK(squared_error(t1, e) == 0.0);

  const ChannelRealization t2{{cd(0.8, 0.0), cd(0.0, 0.2)}, {1, 4}};
  e.taps = {cd(0.8, 0.0), cd(0.0, 0.0)};
  e.delays = {1, 4};
  CHECK(squared_error(t2, e) == doctest::Approx(0.04).epsilon(1e-12));
  // a tap missing from the estimate counts in full
  e.taps = {cd(0.8, 0.0)};
  e.delays = {1};
  CHECK(squared_error(t2, e) == doctest::Approx(0.04).epsilon(1e-12));
}

TEST_CASE("estimate csv and parsing") {
  ChannelEstimate e;
  e.method = EstimatorKind::kNm;
  e.taps = {cd(0.5, -0.5)};
  e.delays = {2};
  e.residual_power = 0.25;
  std::ostringstream os;
  write_estimate_csv_header(os);
  write_estimate_csv(os, e);
  CHECK(os.str() == "method,tap_index,delay_samples,re,im,residual_power\nNM,0,2,0.5,-0.5,0.25\n");
  CHECK(parse_estimator("ls") == EstimatorKind::kLs);
  CHECK(parse_estimator("mmse") == EstimatorKind::kLmmse);
  CHECK(parse_estimator("nm") == EstimatorKind::kNm);
  CHECK_THROWS_AS(parse_estimator("ml"), std::invalid_argument);
}

}  // TEST_SUITE
