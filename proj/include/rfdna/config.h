// rfdna/config.h

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

#ifndef RFDNA_CONFIG_H_
#define RFDNA_CONFIG_H_

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "rfdna/channel.h"
#include "rfdna/chanest.h"
#include "rfdna/classify.h"
#include "rfdna/equalize.h"
#include "rfdna/fingerprint.h"
#include "rfdna/nelder_mead.h"
#include "rfdna/signal_model.h"

namespace rfdna {

/// Where the estimator comparison takes the burst start from: the known
/// placement, or the synchronizer.
enum class TimingMode { kIdeal, kSync };

std::string to_string(TimingMode t);
TimingMode parse_timing(const std::string &s);

struct ExperimentConfig {
  std::vector<EmitterProfile> radios = reference_population();
  ChannelProfile channel = shipped_profile("l2");
  std::vector<double> snr_grid;  // empty: the experiment's default grid
  std::size_t n_noise_realizations = 3;      // N_z
  std::size_t n_signals_per_radio = 400;     // N_B
  std::size_t n_estimation_preambles = 200;  // per radio
  double train_fraction = 0.5;
  std::size_t k_folds = 5;
  EstimatorKind estimator = EstimatorKind::kNm;
  EqualizerKind equalizer = EqualizerKind::kMmse;
  SurfaceKind fingerprint = SurfaceKind::kMagnitude;
  ClassifierKind classifier = ClassifierKind::kMdaMl;
  std::size_t n_candidates = 20;  // N_p
  std::uint64_t master_seed = 1;
  std::size_t workers = 1;
  TimingMode est_timing = TimingMode::kIdeal;
  std::size_t max_placement_offset = 64;  // leading samples before each burst
  std::size_t trailing_samples = 32;
  double mda_regularization = 1.0;
  NmConfig nm;
  GrlvqiParams grlvqi;
  FingerprintConfig fingerprint_cfg;

  /// Throws std::invalid_argument when an invariant fails.
  void validate() const;
  /// N_B = 2000, N_z = 10, 1000 estimation preambles per radio.
  void apply_paper_scale();
  /// Stable text form of every field; the manifest hashes it.
  std::string canonical() const;
};

std::vector<double> default_est_snr_grid();       // 0:3:30
std::vector<double> default_classify_snr_grid();  // 9:3:30

/// "lo:step:hi", inclusive, or a comma list. "inf" is the noiseless case.
std::vector<double> parse_snr_grid(const std::string &s);
std::string format_snr(double snr_db);

/// Reads INI-style sections ("[experiment]", "[channel]", "[nm]",
/// "[grlvqi]", "[radio.<id>]") over a default-constructed config.
ExperimentConfig load_config(std::istream &is);
ExperimentConfig load_config_file(const std::string &path);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(const std::string &s);

}  // namespace rfdna

#endif  // RFDNA_CONFIG_H_
