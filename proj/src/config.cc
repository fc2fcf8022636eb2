// rfdna/config.cc

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

#include "rfdna/config.h"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

namespace rfdna {

namespace pt = boost::property_tree;

std::string to_string(TimingMode t) { return t == TimingMode::kIdeal ? "ideal" : "sync"; }

TimingMode parse_timing(const std::string &s) {
  if (s == "ideal") return TimingMode::kIdeal;
  if (s == "sync") return TimingMode::kSync;
  throw std::invalid_argument("unknown timing mode '" + s + "'");
}

void ExperimentConfig::validate() const {
  if (radios.empty()) throw std::invalid_argument("config: no radios");
  std::set<std::string> ids;
  for (const auto &r : radios) {
    r.validate();
    if (!ids.insert(r.id).second) throw std::invalid_argument("config: duplicate radio id " + r.id);
  }
  channel.validate();
  for (double s : snr_grid)
    if (std::isnan(s) || s == -std::numeric_limits<double>::infinity())
      throw std::invalid_argument("config: bad SNR value");
  if (n_noise_realizations == 0) throw std::invalid_argument("config: N_z must be >= 1");
  if (k_folds < 2) throw std::invalid_argument("config: k_folds must be >= 2");
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw std::invalid_argument("config: train_fraction must lie in (0, 1)");
  if (n_candidates == 0 || n_candidates % radios.size() != 0)
    throw std::invalid_argument("config: N_p must be a positive multiple of the radio count");
  if (n_signals_per_radio == 0 || n_estimation_preambles == 0)
    throw std::invalid_argument("config: signal counts must be positive");
  if (workers == 0) throw std::invalid_argument("config: workers must be >= 1");
  if (!(mda_regularization >= 0.0)) throw std::invalid_argument("config: regularization < 0");
  nm.validate();
  fingerprint_cfg.gabor.validate();
}

void ExperimentConfig::apply_paper_scale() {
  n_signals_per_radio = 2000;
  n_noise_realizations = 10;
  n_estimation_preambles = 1000;
}

std::string format_snr(double snr_db) {
  if (std::isinf(snr_db)) return snr_db > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << snr_db;
  return os.str();
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "channel=" << channel.name << ' ' << format_channel_profile(channel)
     << " fading=" << channel.fading << '\n';
  os << "snr=";
  for (double s : snr_grid) os << format_snr(s) << ',';
  os << "\nN_z=" << n_noise_realizations << "\nN_B=" << n_signals_per_radio
     << "\nn_est=" << n_estimation_preambles << "\ntrain_fraction=" << train_fraction
     << "\nk=" << k_folds << "\nestimator=" << to_string(estimator)
     << "\nequalizer=" << to_string(equalizer) << "\nfingerprint=" << to_string(fingerprint)
     << "\nclassifier=" << to_string(classifier) << "\nN_p=" << n_candidates
     << "\nseed=" << master_seed << "\ntiming=" << to_string(est_timing)
     << "\nmax_offset=" << max_placement_offset << "\ntrailing=" << trailing_samples
     << "\nmda_reg=" << mda_regularization << "\nnm=" << nm.rho << ',' << nm.chi << ','
     << nm.gamma << ',' << nm.phi << ',' << nm.eps1 << ',' << nm.eps2 << ','
     << nm.max_iterations << ',' << nm.step_abs << ',' << nm.step_rel
     << "\ngrlvqi=" << grlvqi.prototypes_per_class << ',' << grlvqi.epochs << ','
     << grlvqi.lr_prototype << ',' << grlvqi.lr_relevance << ',' << grlvqi.steepness << ','
     << grlvqi.init_jitter << "\ngabor=" << fingerprint_cfg.gabor.M << ','
     << fingerprint_cfg.gabor.K_G << ',' << fingerprint_cfg.gabor.N_delta << ','
     << static_cast<int>(fingerprint_cfg.gabor.window) << ','
     << fingerprint_cfg.gabor.gaussian_sigma << "\npatch=" << fingerprint_cfg.n_t << 'x'
     << fingerprint_cfg.n_f << '\n';
  // workers is left out: it does not change results.
  for (const auto &r : radios)
    os << "radio " << r.id << ' ' << r.iq_gain_imbalance_db << ' ' << r.iq_phase_imbalance_deg
       << ' ' << r.a1 << ' ' << r.a3 << ' ' << r.a5 << ' ' << r.residual_cfo_hz << ' '
       << r.dc_offset << '\n';
  return os.str();
}

std::vector<double> default_est_snr_grid() { return parse_snr_grid("0:3:30"); }
std::vector<double> default_classify_snr_grid() { return parse_snr_grid("9:3:30"); }

namespace {

double to_double(const std::string &text) {
  std::string s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t b = 0;
  while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  s = s.substr(b);
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception &) {
    throw std::invalid_argument("expected a number, got '" + text + "'");
  }
  if (used != s.size()) throw std::invalid_argument("expected a number, got '" + text + "'");
  return v;
}

std::size_t to_count(const std::string &s) {
  const double v = to_double(s);
  if (!(v >= 0.0) || v != std::floor(v) || v > 1e15)
    throw std::invalid_argument("expected a nonnegative integer, got '" + s + "'");
  return static_cast<std::size_t>(v);
}

cd to_complex(const std::string &s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) return cd(to_double(s), 0.0);
  return cd(to_double(s.substr(0, comma)), to_double(s.substr(comma + 1)));
}

}  // namespace

std::vector<double> parse_snr_grid(const std::string &s) {
  std::vector<double> out;
  if (s.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(to_double(item));
    if (parts.size() != 3 || !(parts[1] > 0.0) || !(parts[2] >= parts[0]) ||
        !std::isfinite(parts[0]) || !std::isfinite(parts[2]))
      throw std::invalid_argument("SNR grid must be lo:step:hi with step > 0");
    const auto n = static_cast<std::size_t>(std::floor((parts[2] - parts[0]) / parts[1] + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) out.push_back(parts[0] + static_cast<double>(i) * parts[1]);
  } else {
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(item));
  }
  if (out.empty()) throw std::invalid_argument("empty SNR grid");
  return out;
}

ExperimentConfig load_config(std::istream &is) {
  pt::ptree tree;
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error &e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }

  ExperimentConfig cfg;
  bool custom_radios = false;
  std::vector<EmitterProfile> radios;

  for (const auto &[section, body] : tree) {
    auto unknown = [&](const std::string &key) {
      throw std::invalid_argument("config: unknown key '" + key + "' in [" + section + "]");
    };
    if (section == "experiment") {
      for (const auto &[key, node] : body) {
        const std::string v = node.data();
        if (key == "channel") cfg.channel = shipped_profile(v);
        else if (key == "snr") cfg.snr_grid = parse_snr_grid(v);
        else if (key == "n_noise_realizations") cfg.n_noise_realizations = to_count(v);
        else if (key == "n_signals_per_radio") cfg.n_signals_per_radio = to_count(v);
        else if (key == "n_estimation_preambles") cfg.n_estimation_preambles = to_count(v);
        else if (key == "train_fraction") cfg.train_fraction = to_double(v);
        else if (key == "k_folds") cfg.k_folds = to_count(v);
        else if (key == "estimator") cfg.estimator = parse_estimator(v);
        else if (key == "equalizer") cfg.equalizer = parse_equalizer(v);
        else if (key == "fingerprint") cfg.fingerprint = parse_surface_kind(v);
        else if (key == "classifier") cfg.classifier = parse_classifier(v);
        else if (key == "n_candidates") cfg.n_candidates = to_count(v);
        else if (key == "seed") cfg.master_seed = std::stoull(v);
        else if (key == "workers") cfg.workers = to_count(v);
        else if (key == "timing") cfg.est_timing = parse_timing(v);
        else if (key == "max_placement_offset") cfg.max_placement_offset = to_count(v);
        else if (key == "mda_regularization") cfg.mda_regularization = to_double(v);
        else if (key == "population") {
          if (v == "reference") cfg.radios = reference_population();
          else if (v == "identical") cfg.radios = identical_population();
          else throw std::invalid_argument("config: unknown population '" + v + "'");
        } else unknown(key);
      }
    } else if (section == "channel") {
      for (const auto &[key, node] : body) {
        if (key == "profile") cfg.channel = parse_channel_profile(node.data());
        else if (key == "name") cfg.channel = shipped_profile(node.data());
        else unknown(key);
      }
    } else if (section == "nm") {
      for (const auto &[key, node] : body) {
        const std::string v = node.data();
        if (key == "rho") cfg.nm.rho = to_double(v);
        else if (key == "chi") cfg.nm.chi = to_double(v);
        else if (key == "gamma") cfg.nm.gamma = to_double(v);
        else if (key == "phi") cfg.nm.phi = to_double(v);
        else if (key == "eps1") cfg.nm.eps1 = to_double(v);
        else if (key == "eps2") cfg.nm.eps2 = to_double(v);
        else if (key == "max_iterations") cfg.nm.max_iterations = to_count(v);
        else unknown(key);
      }
    } else if (section == "grlvqi") {
      for (const auto &[key, node] : body) {
        const std::string v = node.data();
        if (key == "prototypes_per_class") cfg.grlvqi.prototypes_per_class = to_count(v);
        else if (key == "epochs") cfg.grlvqi.epochs = to_count(v);
        else if (key == "lr_prototype") cfg.grlvqi.lr_prototype = to_double(v);
        else if (key == "lr_relevance") cfg.grlvqi.lr_relevance = to_double(v);
        else if (key == "steepness") cfg.grlvqi.steepness = to_double(v);
        else unknown(key);
      }
    } else if (section.rfind("radio.", 0) == 0) {
      custom_radios = true;
      EmitterProfile r;
      r.id = section.substr(6);
      for (const auto &[key, node] : body) {
        const std::string v = node.data();
        if (key == "iq_gain_imbalance_db") r.iq_gain_imbalance_db = to_double(v);
        else if (key == "iq_phase_imbalance_deg") r.iq_phase_imbalance_deg = to_double(v);
        else if (key == "a1") r.a1 = to_complex(v);
        else if (key == "a3") r.a3 = to_complex(v);
        else if (key == "a5") r.a5 = to_complex(v);
        else if (key == "residual_cfo_hz") r.residual_cfo_hz = to_double(v);
        else if (key == "dc_offset") r.dc_offset = to_complex(v);
        else unknown(key);
      }
      radios.push_back(r);
    } else {
      throw std::invalid_argument("config: unknown section [" + section + "]");
    }
  }
  if (custom_radios) cfg.radios = radios;
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  return load_config(in);
}

std::uint64_t fnv1a64(const std::string &s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace rfdna
