// rfdna/channel.cc

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

#include "rfdna/channel.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace rfdna {

std::vector<int> ChannelProfile::sample_delays(double sample_rate) const {
  std::vector<int> out;
  out.reserve(delays_ns.size());
  for (double d : delays_ns) {
    const double samples = d * 1e-9 * sample_rate;
    const double rounded = std::round(samples);
    if (std::abs(samples - rounded) > 1e-6)
      throw std::invalid_argument("channel profile '" + name +
                                  "': delay is not a multiple of the sample period");
    out.push_back(static_cast<int>(rounded));
  }
  return out;
}

void ChannelProfile::validate(double sample_rate) const {
  if (delays_ns.empty() || delays_ns.size() != variances.size())
    throw std::invalid_argument("channel profile '" + name + "': bad path count");
  for (std::size_t k = 0; k < delays_ns.size(); ++k) {
    if (!std::isfinite(delays_ns[k]) || delays_ns[k] < 0.0)
      throw std::invalid_argument("channel profile '" + name + "': bad delay");
    if (k > 0 && !(delays_ns[k] > delays_ns[k - 1]))
      throw std::invalid_argument("channel profile '" + name +
                                  "': delays must be strictly increasing");
    if (!std::isfinite(variances[k]) || variances[k] < 0.0)
      throw std::invalid_argument("channel profile '" + name + "': bad variance");
  }
  double total = 0.0;
  for (double v : variances) total += v;
  if (std::abs(total - 1.0) > 1e-3)
    throw std::invalid_argument("channel profile '" + name + "': total power != 1");
  (void)sample_delays(sample_rate);
}

int ChannelRealization::max_delay() const {
  return delays.empty() ? 0 : *std::max_element(delays.begin(), delays.end());
}

double tap_variance(std::size_t k, double sample_period, double rms_delay_spread) {
  if (!(sample_period > 0.0) || !(rms_delay_spread > 0.0))
    throw std::invalid_argument("tap_variance: Ts and Tr must be positive");
  const double r = sample_period / rms_delay_spread;
  return 0.5 * ((1.0 - std::exp(-r)) * std::exp(-static_cast<double>(k) * r));
}

ChannelProfile exponential_profile(std::size_t n_paths, double rms_delay_spread_ns,
                                   double sample_rate) {
  if (n_paths == 0) throw std::invalid_argument("exponential_profile: no paths");
  const double ts_ns = 1e9 / sample_rate;
  ChannelProfile p;
  p.name = "exp" + std::to_string(n_paths);
  p.rms_delay_spread_ns = rms_delay_spread_ns;
  double total = 0.0;
  for (std::size_t k = 0; k < n_paths; ++k) {
    // tap power is twice the per-component variance
    const double v = 2.0 * tap_variance(k, ts_ns, rms_delay_spread_ns);
    p.delays_ns.push_back(static_cast<double>(k) * ts_ns);
    p.variances.push_back(v);
    total += v;
  }
  for (double &v : p.variances) v /= total;
  return p;
}

ChannelProfile shipped_profile(const std::string &name) {
  ChannelProfile p;
  p.name = name;
  if (name == "l2") {
    p.delays_ns = {50, 200};
    p.variances = {0.8, 0.2};
  } else if (name == "l3") {
    p.delays_ns = {50, 150, 250};
    p.variances = {0.8, 0.13, 0.07};
  } else if (name == "l5") {
    p.delays_ns = {50, 100, 150, 200, 250};
    p.variances = {0.865, 0.117, 0.016, 0.002, 0.0003};
  } else if (name == "none") {
    p.delays_ns = {0};
    p.variances = {1.0};
    p.fading = false;
  } else {
    throw std::invalid_argument("unknown channel profile '" + name + "'");
  }
  return p;
}

std::vector<std::string> shipped_profile_names() { return {"none", "l2", "l3", "l5"}; }

ChannelRealization draw_channel(const ChannelProfile &profile, Rng &rng,
                                double sample_rate) {
  profile.validate(sample_rate);
  ChannelRealization ch;
  ch.delays = profile.sample_delays(sample_rate);
  ch.taps.resize(profile.n_paths());
  for (std::size_t k = 0; k < profile.n_paths(); ++k) {
    if (!profile.fading) {
      ch.taps[k] = cd(std::sqrt(profile.variances[k]), 0.0);
      continue;
    }
    const double sd = std::sqrt(profile.variances[k] / 2.0);
    const double a = standard_normal(rng);
    const double b = standard_normal(rng);
    ch.taps[k] = cd(sd * a, sd * b);
  }
  return ch;
}

ComplexBaseband apply_channel(const ComplexBaseband &s, const ChannelRealization &ch) {
  if (s.empty()) throw std::invalid_argument("apply_channel: empty signal");
  if (ch.taps.size() != ch.delays.size())
    throw std::invalid_argument("apply_channel: taps/delays mismatch");
  for (int d : ch.delays)
    if (d < 0) throw std::invalid_argument("apply_channel: negative delay");
  const auto max_delay = static_cast<std::size_t>(ch.max_delay());
  if (max_delay >= s.size())
    throw std::invalid_argument("apply_channel: delay exceeds signal length");

  std::vector<cd> y(s.size() + max_delay, cd(0.0, 0.0));
  for (std::size_t k = 0; k < ch.taps.size(); ++k) {
    const auto d = static_cast<std::size_t>(ch.delays[k]);
    const cd a = ch.taps[k];
    for (std::size_t m = 0; m < s.size(); ++m) y[m + d] += a * s.samples[m];
  }
  return ComplexBaseband(std::move(y), s.sample_rate);
}

std::pair<std::size_t, std::size_t> occupied_span(const std::vector<cd> &s) {
  std::size_t first = 0;
  while (first < s.size() && s[first] == cd(0.0, 0.0)) ++first;
  std::size_t last = s.size();
  while (last > first && s[last - 1] == cd(0.0, 0.0)) --last;
  return {first, last};
}

NoisySignal add_awgn(const ComplexBaseband &s, double snr_db, Rng &rng) {
  const auto [first, last] = occupied_span(s.samples);
  if (first == last) throw std::invalid_argument("add_awgn: all-zero signal");
  double ps = 0.0;
  for (std::size_t m = first; m < last; ++m) ps += std::norm(s.samples[m]);
  ps /= static_cast<double>(last - first);

  NoisySignal out{s, 0.0, ps};
  if (std::isinf(snr_db) && snr_db > 0) return out;
  if (!std::isfinite(snr_db)) throw std::invalid_argument("add_awgn: bad SNR");

  out.noise_variance = ps / std::pow(10.0, snr_db / 10.0);
  const double sd = std::sqrt(out.noise_variance / 2.0);
  for (auto &v : out.signal.samples) {
    const double a = standard_normal(rng);
    const double b = standard_normal(rng);
    v += cd(sd * a, sd * b);
  }
  return out;
}

namespace {

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_csv_doubles(const std::string &text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

ChannelProfile parse_channel_profile(const std::string &text) {
  ChannelProfile p;
  p.name = "custom";
  long n_paths = -1;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ';')) {
    field = trim(field);
    if (field.empty()) continue;
    const auto eq = field.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("channel profile: expected key=value in '" + field + "'");
    const std::string key = trim(field.substr(0, eq));
    const std::string value = trim(field.substr(eq + 1));
    if (key == "L") {
      n_paths = std::stol(value);
    } else if (key == "delays_ns") {
      p.delays_ns = parse_csv_doubles(value);
    } else if (key == "variances") {
      p.variances = parse_csv_doubles(value);
    } else if (key == "name") {
      p.name = value;
    } else if (key == "rms_delay_spread_ns") {
      p.rms_delay_spread_ns = std::stod(value);
    } else {
      throw std::invalid_argument("channel profile: unknown key '" + key + "'");
    }
  }
  if (n_paths < 0) throw std::invalid_argument("channel profile: missing L");
  if (static_cast<std::size_t>(n_paths) != p.delays_ns.size() ||
      static_cast<std::size_t>(n_paths) != p.variances.size())
    throw std::invalid_argument("channel profile: L does not match list lengths");
  p.validate();
  return p;
}

std::string format_channel_profile(const ChannelProfile &profile) {
  std::ostringstream os;
  os << std::setprecision(17) << "L=" << profile.n_paths() << "; delays_ns=";
  for (std::size_t k = 0; k < profile.n_paths(); ++k)
    os << (k ? "," : "") << profile.delays_ns[k];
  os << "; variances=";
  for (std::size_t k = 0; k < profile.n_paths(); ++k)
    os << (k ? "," : "") << profile.variances[k];
  return os.str();
}

void write_realization_csv(std::ostream &os, const ChannelRealization &ch) {
  os << "tap_index,delay_samples,re,im\n";
  os << std::setprecision(17);
  for (std::size_t k = 0; k < ch.taps.size(); ++k)
    os << k << ',' << ch.delays[k] << ',' << ch.taps[k].real() << ','
       << ch.taps[k].imag() << '\n';
}

}  // namespace rfdna
