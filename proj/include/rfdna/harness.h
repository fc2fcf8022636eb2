// rfdna/harness.h

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

#ifndef RFDNA_HARNESS_H_
#define RFDNA_HARNESS_H_

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rfdna/channel.h"
#include "rfdna/chanest.h"
#include "rfdna/config.h"
#include "rfdna/fingerprint.h"

namespace rfdna {

/// Runs fn(0) .. fn(n-1) on up to `workers` threads. Work is handed out by
/// index, so any result written to slot i is the same for every width. The
/// first exception thrown is rethrown after all threads join.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)> &fn);

// Seed splitting. Every random draw comes from
//   derive_seed(master_seed, {tag, radio, signal, ...})
// so a work unit's stream depends only on its coordinates.
enum SeedTag : std::uint64_t {
  kTagChannel = 1,      // {tag, radio, signal}
  kTagPlacement = 2,    // {tag, radio, signal}
  kTagNoise = 3,        // {tag, radio, signal, snr bits, z}
  kTagSplit = 4,        // {tag, radio}
  kTagCandidates = 5,   // {tag}
  kTagFolds = 6,        // {tag, z}
  kTagGrlvqi = 7,       // {tag, snr bits, z, fold}
  kTagEstimation = 100  // added to the channel/placement/noise tags for the estimator study
};

std::uint64_t snr_key(double snr_db);

/// One received burst: `offset` zeros, the faded emitter preamble, a short
/// zero tail, then AWGN at `snr_db` over the whole record.
struct Burst {
  ComplexBaseband rx;
  std::size_t offset = 0;
  ChannelRealization channel;
  double noise_variance = 0.0;
};

Burst make_burst(const ComplexBaseband &tx, const ChannelProfile &profile, double snr_db,
                 std::uint64_t channel_seed, std::uint64_t placement_seed,
                 std::uint64_t noise_seed, const ExperimentConfig &cfg);

/// Burst start estimate P = first_path_offset - first profile delay, clamped
/// so a full preamble plus channel tail fits.
std::size_t sync_origin(const Burst &b, const ChannelProfile &profile);

/// Channel estimate for a burst whose preamble starts at `origin`.
ChannelEstimate estimate_channel(const Burst &b, std::size_t origin, EstimatorKind kind,
                                 const ChannelProfile &profile,
                                 const std::vector<ComplexBaseband> &candidates,
                                 const NmConfig &nm);

/// Equalized 320-sample preamble. Infinite SNR uses ZF; a ZF spectral null
/// falls back to MMSE.
ComplexBaseband equalize_burst(const Burst &b, std::size_t origin, const ChannelEstimate &h,
                               EqualizerKind kind, double snr_db);

struct CandidateRef {
  std::size_t radio;
  std::size_t signal;
};

/// N_p / N_D entries drawn uniformly without replacement from each radio's
/// pool. Throws if a pool is smaller than the quota.
std::vector<CandidateRef> select_candidates(const std::vector<std::vector<std::size_t>> &pools,
                                            std::size_t n_candidates, Rng &rng);

/// Emitter-impaired, channel-free preamble of every radio.
std::vector<ComplexBaseband> transmitted_preambles(const ExperimentConfig &cfg);

// ---- estimator comparison ----

struct EstCompareRow {
  EstimatorKind estimator;
  double snr_db;
  double mean_squared_error;
  std::size_t n_trials;
};

std::vector<EstCompareRow> run_estimator_comparison(
    const ExperimentConfig &cfg,
    const std::vector<EstimatorKind> &estimators = {EstimatorKind::kLs, EstimatorKind::kLmmse,
                                                    EstimatorKind::kNm});

void write_est_compare_csv(std::ostream &os, const std::vector<EstCompareRow> &rows);

// ---- classification ----

struct Split {
  std::vector<std::vector<std::size_t>> train;  // per radio, signal indices
  std::vector<std::vector<std::size_t>> blind;
};

Split split_signals(const ExperimentConfig &cfg);

/// Fingerprints of every train and blind signal at one SNR, one matrix per
/// noise realization. Rows follow train_ids / blind_ids.
struct SnrFingerprints {
  double snr_db = 0.0;
  std::vector<Eigen::MatrixXd> train_mag, train_phase, blind_mag, blind_phase;
  std::vector<CandidateRef> train_ids, blind_ids;
  std::vector<int> train_labels, blind_labels;

  const std::vector<Eigen::MatrixXd> &train(SurfaceKind k) const {
    return k == SurfaceKind::kMagnitude ? train_mag : train_phase;
  }
  const std::vector<Eigen::MatrixXd> &blind(SurfaceKind k) const {
    return k == SurfaceKind::kMagnitude ? blind_mag : blind_phase;
  }
};

/// NM candidates for a classification run, drawn from the training signals.
std::vector<ComplexBaseband> classification_candidates(const ExperimentConfig &cfg,
                                                       const Split &split);

SnrFingerprints build_snr_fingerprints(const ExperimentConfig &cfg, const Split &split,
                                       const std::vector<ComplexBaseband> &candidates,
                                       double snr_db);

/// Stratified fold index for every training row; the same for every SNR.
std::vector<std::size_t> assign_folds(const std::vector<int> &labels, std::size_t k, Rng &rng);

struct ConfusionMatrix {
  double snr_db = 0.0;
  std::vector<std::vector<std::size_t>> counts;  // [true][declared]

  double accuracy() const;
  double percent_correct(std::size_t radio) const;
};

struct SnrOutcome {
  ConfusionMatrix confusion;
  std::size_t best_z = 0, best_fold = 0;
  std::vector<double> validation_error;  // percent, index z * k + fold
};

/// k-fold cross-validation in every noise realization; the model with the
/// lowest validation error then classifies the blind rows of every
/// realization.
SnrOutcome evaluate_snr(const SnrFingerprints &fps, SurfaceKind kind, ClassifierKind classifier,
                        const ExperimentConfig &cfg);

struct ClassificationResult {
  std::vector<SnrOutcome> per_snr;
};

ClassificationResult run_classification_experiment(const ExperimentConfig &cfg);

void write_accuracy_csv(std::ostream &os, const ExperimentConfig &cfg,
                        const ClassificationResult &res);
void write_confusion_csv(std::ostream &os, const ExperimentConfig &cfg, const ConfusionMatrix &cm);
/// Whitespace table for gnuplot: snr, mean accuracy, then one column per radio.
void write_accuracy_table(std::ostream &os, const ExperimentConfig &cfg,
                          const ClassificationResult &res);

/// manifest.txt: experiment name, seed and config hash.
void write_manifest(const std::string &dir, const std::string &experiment,
                    const ExperimentConfig &cfg);

/// Full CLI experiments: run and write every output file into `dir`.
void run_est_compare_to_dir(const ExperimentConfig &cfg, const std::string &dir);
void run_classify_to_dir(const ExperimentConfig &cfg, const std::string &dir);

}  // namespace rfdna

#endif  // RFDNA_HARNESS_H_
