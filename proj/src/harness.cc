// rfdna/harness.cc

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

#include "rfdna/harness.h"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "rfdna/equalize.h"
#include "rfdna/signal_model.h"
#include "rfdna/sync.h"

namespace rfdna {

void parallel_for(std::size_t n, std::size_t workers,
                  const std::function<void(std::size_t)> &fn) {
  if (n == 0) return;
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex mu;
  auto body = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!error) error = std::current_exception();
        next = n;
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto &t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::uint64_t snr_key(double snr_db) { return std::bit_cast<std::uint64_t>(snr_db); }

Burst make_burst(const ComplexBaseband &tx, const ChannelProfile &profile, double snr_db,
                 std::uint64_t channel_seed, std::uint64_t placement_seed,
                 std::uint64_t noise_seed, const ExperimentConfig &cfg) {
  Burst b;
  Rng crng(channel_seed);
  b.channel = draw_channel(profile, crng, tx.sample_rate);
  Rng prng(placement_seed);
  b.offset = static_cast<std::size_t>(uniform_index(prng, 0, cfg.max_placement_offset));

  const ComplexBaseband faded = apply_channel(tx, b.channel);
  std::vector<cd> rx(b.offset + faded.size() + cfg.trailing_samples, cd(0.0, 0.0));
  std::copy(faded.samples.begin(), faded.samples.end(), rx.begin() + b.offset);

  Rng nrng(noise_seed);
  NoisySignal noisy = add_awgn(ComplexBaseband(std::move(rx), tx.sample_rate), snr_db, nrng);
  b.rx = std::move(noisy.signal);
  b.noise_variance = noisy.noise_variance;
  return b;
}

std::size_t sync_origin(const Burst &b, const ChannelProfile &profile) {
  const TimingEstimate t = estimate_time_offset(b.rx);
  const auto delays = profile.sample_delays(b.rx.sample_rate);
  const auto first = static_cast<std::size_t>(delays.front());
  const auto tail = static_cast<std::size_t>(delays.back());
  std::size_t origin = t.first_path_offset >= first ? t.first_path_offset - first : 0;
  const std::size_t last = b.rx.size() - kPreambleLength - tail;
  return std::min(origin, last);
}

namespace {

const std::vector<cd> &lts_reference() {
  static const std::vector<cd> X = lts_frequency_reference();
  return X;
}

}  // namespace

ChannelEstimate estimate_channel(const Burst &b, std::size_t origin, EstimatorKind kind,
                                 const ChannelProfile &profile,
                                 const std::vector<ComplexBaseband> &candidates,
                                 const NmConfig &nm) {
  const auto delays = profile.sample_delays(b.rx.sample_rate);
  if (origin + kPreambleLength > b.rx.size())
    throw std::invalid_argument("estimate_channel: preamble runs past the record");
  const std::span<const cd> y1(b.rx.samples.data() + origin + kLts1Start, kLtsLength);
  const std::span<const cd> y2(b.rx.samples.data() + origin + kLts2Start, kLtsLength);
  ChannelEstimate ls = ls_estimate(y1, y2, lts_reference(), delays);
  switch (kind) {
    case EstimatorKind::kLs:
      return ls;
    case EstimatorKind::kLmmse:
      return lmmse_estimate(ls, profile, b.noise_variance, lts_reference());
    case EstimatorKind::kNm:
      return nm_estimate(b.rx, candidates, origin, delays, nm, ls.taps);
  }
  throw std::logic_error("estimate_channel: bad estimator");
}

ComplexBaseband equalize_burst(const Burst &b, std::size_t origin, const ChannelEstimate &h,
                               EqualizerKind kind, double snr_db) {
  const auto tail = static_cast<std::size_t>(*std::max_element(h.delays.begin(), h.delays.end()));
  const std::size_t end = std::min(b.rx.size(), origin + kPreambleLength + tail);
  ComplexBaseband span(std::vector<cd>(b.rx.samples.begin() + origin, b.rx.samples.begin() + end),
                       b.rx.sample_rate);
  const bool noiseless = std::isinf(snr_db);
  if (kind == EqualizerKind::kZf || noiseless) {
    try {
      return zf_equalize(span, h, kEqualizerFftSize, kPreambleLength);
    } catch (const SpectralNullError &) {
      // Deep fade: regularize instead.
    }
  }
  return mmse_equalize(span, h, noiseless ? 100.0 : snr_db, kEqualizerFftSize, kPreambleLength);
}

std::vector<CandidateRef> select_candidates(const std::vector<std::vector<std::size_t>> &pools,
                                            std::size_t n_candidates, Rng &rng) {
  if (pools.empty()) throw std::invalid_argument("select_candidates: no radios");
  if (n_candidates % pools.size() != 0)
    throw std::invalid_argument("select_candidates: N_p not divisible by the radio count");
  const std::size_t quota = n_candidates / pools.size();
  std::vector<CandidateRef> out;
  for (std::size_t r = 0; r < pools.size(); ++r) {
    if (quota > pools[r].size())
      throw std::invalid_argument("select_candidates: quota exceeds the radio's signals");
    std::vector<std::size_t> pool = pools[r];
    shuffle(pool.begin(), pool.end(), rng);
    for (std::size_t i = 0; i < quota; ++i) out.push_back({r, pool[i]});
  }
  return out;
}

std::vector<ComplexBaseband> transmitted_preambles(const ExperimentConfig &cfg) {
  const ComplexBaseband preamble = generate_preamble();
  std::vector<ComplexBaseband> tx;
  for (const auto &r : cfg.radios) tx.push_back(apply_emitter(r, preamble));
  return tx;
}

namespace {

std::vector<ComplexBaseband> candidate_waveforms(const std::vector<CandidateRef> &refs,
                                                 const std::vector<ComplexBaseband> &tx) {
  // Every transmission of a radio carries the same preamble, so a candidate
  // is that radio's emitter-impaired waveform.
  std::vector<ComplexBaseband> out;
  for (const auto &c : refs) out.push_back(tx[c.radio]);
  return out;
}

}  // namespace

std::vector<EstCompareRow> run_estimator_comparison(const ExperimentConfig &cfg,
                                                    const std::vector<EstimatorKind> &estimators) {
  cfg.validate();
  const auto grid = cfg.snr_grid.empty() ? default_est_snr_grid() : cfg.snr_grid;
  const auto tx = transmitted_preambles(cfg);
  const std::size_t R = cfg.radios.size(), N = cfg.n_estimation_preambles;
  const std::size_t Z = cfg.n_noise_realizations, E = estimators.size();

  std::vector<std::vector<std::size_t>> pools(R);
  for (auto &p : pools) {
    p.resize(N);
    std::iota(p.begin(), p.end(), 0);
  }
  Rng crng(derive_seed(cfg.master_seed, {kTagCandidates + kTagEstimation}));
  const auto candidates = candidate_waveforms(select_candidates(pools, cfg.n_candidates, crng), tx);

  const auto delays = cfg.channel.sample_delays();
  std::vector<EstCompareRow> rows;
  for (double snr : grid) {
    const std::size_t units = R * N * Z;
    std::vector<double> err(units * E, 0.0);
    parallel_for(units, cfg.workers, [&](std::size_t u) {
      const std::size_t r = u / (N * Z), i = (u / Z) % N, z = u % Z;
      const Burst b = make_burst(
          tx[r], cfg.channel, snr,
          derive_seed(cfg.master_seed, {kTagChannel + kTagEstimation, r, i}),
          derive_seed(cfg.master_seed, {kTagPlacement + kTagEstimation, r, i}),
          derive_seed(cfg.master_seed, {kTagNoise + kTagEstimation, r, i, snr_key(snr), z}), cfg);
      const std::size_t origin =
          cfg.est_timing == TimingMode::kIdeal ? b.offset : sync_origin(b, cfg.channel);
      ChannelRealization truth = b.channel;
      truth.delays = delays;
      for (std::size_t e = 0; e < E; ++e) {
        const auto est = estimate_channel(b, origin, estimators[e], cfg.channel, candidates, cfg.nm);
        err[u * E + e] = squared_error(truth, est);
      }
    });
    for (std::size_t e = 0; e < E; ++e) {
      double sum = 0.0;
      for (std::size_t u = 0; u < units; ++u) sum += err[u * E + e];
      rows.push_back({estimators[e], snr, sum / static_cast<double>(units), units});
    }
  }
  return rows;
}

void write_est_compare_csv(std::ostream &os, const std::vector<EstCompareRow> &rows) {
  os << "estimator,snr_db,mean_squared_error,n_trials\n" << std::setprecision(10);
  for (const auto &r : rows)
    os << to_string(r.estimator) << ',' << format_snr(r.snr_db) << ',' << r.mean_squared_error
       << ',' << r.n_trials << '\n';
}

Split split_signals(const ExperimentConfig &cfg) {
  Split s;
  const std::size_t n_train = static_cast<std::size_t>(
      std::llround(cfg.train_fraction * static_cast<double>(cfg.n_signals_per_radio)));
  if (n_train == 0 || n_train >= cfg.n_signals_per_radio)
    throw std::invalid_argument("split: train fraction leaves an empty set");
  for (std::size_t r = 0; r < cfg.radios.size(); ++r) {
    std::vector<std::size_t> idx(cfg.n_signals_per_radio);
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(derive_seed(cfg.master_seed, {kTagSplit, r}));
    shuffle(idx.begin(), idx.end(), rng);
    std::vector<std::size_t> train(idx.begin(), idx.begin() + n_train);
    std::vector<std::size_t> blind(idx.begin() + n_train, idx.end());
    std::sort(train.begin(), train.end());
    std::sort(blind.begin(), blind.end());
    s.train.push_back(std::move(train));
    s.blind.push_back(std::move(blind));
  }
  return s;
}

SnrFingerprints build_snr_fingerprints(const ExperimentConfig &cfg, const Split &split,
                                       const std::vector<ComplexBaseband> &candidates,
                                       double snr_db) {
  const auto tx = transmitted_preambles(cfg);
  SnrFingerprints out;
  out.snr_db = snr_db;
  for (std::size_t r = 0; r < split.train.size(); ++r) {
    for (auto j : split.train[r]) {
      out.train_ids.push_back({r, j});
      out.train_labels.push_back(static_cast<int>(r));
    }
    for (auto j : split.blind[r]) {
      out.blind_ids.push_back({r, j});
      out.blind_labels.push_back(static_cast<int>(r));
    }
  }
  const std::size_t Z = cfg.n_noise_realizations;
  const std::size_t nt = out.train_ids.size(), nb = out.blind_ids.size();
  const auto F = static_cast<Eigen::Index>(cfg.fingerprint_cfg.n_features());
  for (std::size_t z = 0; z < Z; ++z) {
    out.train_mag.emplace_back(nt, F);
    out.train_phase.emplace_back(nt, F);
    out.blind_mag.emplace_back(nb, F);
    out.blind_phase.emplace_back(nb, F);
  }

  const std::size_t units = (nt + nb) * Z;
  parallel_for(units, cfg.workers, [&](std::size_t u) {
    const std::size_t z = u % Z, s = u / Z;
    const bool is_train = s < nt;
    const std::size_t row = is_train ? s : s - nt;
    const CandidateRef id = is_train ? out.train_ids[row] : out.blind_ids[row];
    const Burst b = make_burst(
        tx[id.radio], cfg.channel, snr_db,
        derive_seed(cfg.master_seed, {kTagChannel, id.radio, id.signal}),
        derive_seed(cfg.master_seed, {kTagPlacement, id.radio, id.signal}),
        derive_seed(cfg.master_seed, {kTagNoise, id.radio, id.signal, snr_key(snr_db), z}), cfg);
    const std::size_t origin = sync_origin(b, cfg.channel);
    const auto est = estimate_channel(b, origin, cfg.estimator, cfg.channel, candidates, cfg.nm);
    const auto eq = equalize_burst(b, origin, est, cfg.equalizer, snr_db);
    const auto [mag, phase] = rf_dna_fingerprints(eq, cfg.fingerprint_cfg);
    auto &M = is_train ? out.train_mag[z] : out.blind_mag[z];
    auto &P = is_train ? out.train_phase[z] : out.blind_phase[z];
    M.row(static_cast<Eigen::Index>(row)) =
        Eigen::Map<const Eigen::RowVectorXd>(mag.features.data(), F);
    P.row(static_cast<Eigen::Index>(row)) =
        Eigen::Map<const Eigen::RowVectorXd>(phase.features.data(), F);
  });
  return out;
}

std::vector<std::size_t> assign_folds(const std::vector<int> &labels, std::size_t k, Rng &rng) {
  if (k < 2) throw std::invalid_argument("assign_folds: k must be >= 2");
  const int C = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::size_t> fold(labels.size(), 0);
  for (int c = 0; c < C; ++c) {
    std::vector<std::size_t> pos;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == c) pos.push_back(i);
    if (pos.size() < k)
      throw std::invalid_argument("assign_folds: insufficient samples for the fold count");
    shuffle(pos.begin(), pos.end(), rng);
    for (std::size_t i = 0; i < pos.size(); ++i) fold[pos[i]] = i % k;
  }
  return fold;
}

double ConfusionMatrix::accuracy() const {
  std::size_t diag = 0, total = 0;
  for (std::size_t i = 0; i < counts.size(); ++i)
    for (std::size_t j = 0; j < counts[i].size(); ++j) {
      total += counts[i][j];
      if (i == j) diag += counts[i][j];
    }
  return total ? static_cast<double>(diag) / static_cast<double>(total) : 0.0;
}

double ConfusionMatrix::percent_correct(std::size_t radio) const {
  const auto &row = counts.at(radio);
  const std::size_t total = std::accumulate(row.begin(), row.end(), std::size_t{0});
  return total ? 100.0 * static_cast<double>(row[radio]) / static_cast<double>(total) : 0.0;
}

namespace {

// A fitted model of either kind behind one predict().
struct AnyModel {
  ClassifierKind kind;
  MdaModel mda;
  GrlvqiModel grlvqi;

  int predict(const Eigen::MatrixXd &X, Eigen::Index row) const {
    const Eigen::RowVectorXd x = X.row(row);
    const std::span<const double> v(x.data(), static_cast<std::size_t>(x.size()));
    return kind == ClassifierKind::kMdaMl ? ml_classify(mda, v).label : grlvqi_classify(grlvqi, v);
  }
};

}  // namespace

SnrOutcome evaluate_snr(const SnrFingerprints &fps, SurfaceKind kind, ClassifierKind classifier,
                        const ExperimentConfig &cfg) {
  const std::size_t Z = fps.train(kind).size(), K = cfg.k_folds;
  const std::size_t R = cfg.radios.size();
  std::vector<std::vector<std::size_t>> folds(Z);
  for (std::size_t z = 0; z < Z; ++z) {
    Rng rng(derive_seed(cfg.master_seed, {kTagFolds, z}));
    folds[z] = assign_folds(fps.train_labels, K, rng);
  }

  std::vector<AnyModel> models(Z * K);
  SnrOutcome out;
  out.validation_error.assign(Z * K, 0.0);
  parallel_for(Z * K, cfg.workers, [&](std::size_t u) {
    const std::size_t z = u / K, f = u % K;
    const Eigen::MatrixXd &X = fps.train(kind)[z];
    std::vector<Eigen::Index> fit_rows, val_rows;
    for (std::size_t i = 0; i < folds[z].size(); ++i)
      (folds[z][i] == f ? val_rows : fit_rows).push_back(static_cast<Eigen::Index>(i));
    Dataset d;
    d.X = X(fit_rows, Eigen::all);
    for (auto i : fit_rows) d.labels.push_back(fps.train_labels[i]);
    AnyModel &m = models[u];
    m.kind = classifier;
    if (classifier == ClassifierKind::kMdaMl) {
      m.mda = mda_fit(d, cfg.mda_regularization);
    } else {
      Rng rng(derive_seed(cfg.master_seed, {kTagGrlvqi, snr_key(fps.snr_db), z, f}));
      m.grlvqi = grlvqi_fit(d, cfg.grlvqi, rng);
    }
    std::size_t wrong = 0;
    for (auto i : val_rows)
      if (m.predict(X, i) != fps.train_labels[i]) ++wrong;
    out.validation_error[u] = 100.0 * static_cast<double>(wrong) / static_cast<double>(val_rows.size());
  });

  const std::size_t best =
      std::min_element(out.validation_error.begin(), out.validation_error.end()) -
      out.validation_error.begin();
  out.best_z = best / K;
  out.best_fold = best % K;

  out.confusion.snr_db = fps.snr_db;
  out.confusion.counts.assign(R, std::vector<std::size_t>(R, 0));
  for (std::size_t z = 0; z < Z; ++z) {
    const Eigen::MatrixXd &B = fps.blind(kind)[z];
    for (Eigen::Index i = 0; i < B.rows(); ++i) {
      const int declared = models[best].predict(B, i);
      ++out.confusion.counts[fps.blind_labels[i]][declared];
    }
  }
  return out;
}

std::vector<ComplexBaseband> classification_candidates(const ExperimentConfig &cfg,
                                                       const Split &split) {
  Rng rng(derive_seed(cfg.master_seed, {kTagCandidates}));
  return candidate_waveforms(select_candidates(split.train, cfg.n_candidates, rng),
                             transmitted_preambles(cfg));
}

ClassificationResult run_classification_experiment(const ExperimentConfig &cfg) {
  cfg.validate();
  const auto grid = cfg.snr_grid.empty() ? default_classify_snr_grid() : cfg.snr_grid;
  const Split split = split_signals(cfg);
  const auto candidates = classification_candidates(cfg, split);
  ClassificationResult res;
  for (double snr : grid) {
    const SnrFingerprints fps = build_snr_fingerprints(cfg, split, candidates, snr);
    res.per_snr.push_back(evaluate_snr(fps, cfg.fingerprint, cfg.classifier, cfg));
  }
  return res;
}

void write_accuracy_csv(std::ostream &os, const ExperimentConfig &cfg,
                        const ClassificationResult &res) {
  os << "snr_db,radio_id,percent_correct\n" << std::fixed << std::setprecision(4);
  for (const auto &o : res.per_snr)
    for (std::size_t r = 0; r < cfg.radios.size(); ++r)
      os << format_snr(o.confusion.snr_db) << ',' << cfg.radios[r].id << ','
         << o.confusion.percent_correct(r) << '\n';
}

void write_confusion_csv(std::ostream &os, const ExperimentConfig &cfg, const ConfusionMatrix &cm) {
  os << "true\\declared";
  for (const auto &r : cfg.radios) os << ',' << r.id;
  os << '\n';
  for (std::size_t i = 0; i < cm.counts.size(); ++i) {
    os << cfg.radios[i].id;
    for (auto c : cm.counts[i]) os << ',' << c;
    os << '\n';
  }
}

void write_accuracy_table(std::ostream &os, const ExperimentConfig &cfg,
                          const ClassificationResult &res) {
  os << "# snr_db mean";
  for (const auto &r : cfg.radios) os << ' ' << r.id;
  os << '\n' << std::fixed << std::setprecision(4);
  for (const auto &o : res.per_snr) {
    os << format_snr(o.confusion.snr_db) << ' ' << 100.0 * o.confusion.accuracy();
    for (std::size_t r = 0; r < cfg.radios.size(); ++r) os << ' ' << o.confusion.percent_correct(r);
    os << '\n';
  }
}

void write_manifest(const std::string &dir, const std::string &experiment,
                    const ExperimentConfig &cfg) {
  const std::string canon = cfg.canonical();
  std::ofstream os(std::filesystem::path(dir) / "manifest.txt");
  os << "experiment: " << experiment << '\n'
     << "seed: " << cfg.master_seed << '\n'
     << "config_hash: fnv1a64:" << std::hex << std::setw(16) << std::setfill('0')
     << fnv1a64(canon) << std::dec << '\n'
     << "seed_scheme: derive_seed(master, {tag, radio, signal, snr_bits, z}) via splitmix64\n"
     << "--- config ---\n"
     << canon;
  if (!os) throw std::runtime_error("cannot write manifest in '" + dir + "'");
}

namespace {

std::ofstream open_out(const std::string &dir, const std::string &name) {
  std::ofstream os(std::filesystem::path(dir) / name);
  if (!os) throw std::runtime_error("cannot write '" + name + "' in '" + dir + "'");
  return os;
}

}  // namespace

void run_est_compare_to_dir(const ExperimentConfig &cfg, const std::string &dir) {
  std::filesystem::create_directories(dir);
  const auto rows = run_estimator_comparison(cfg);
  auto os = open_out(dir, "est_compare.csv");
  write_est_compare_csv(os, rows);
  write_manifest(dir, "run-est-compare", cfg);
}

void run_classify_to_dir(const ExperimentConfig &cfg, const std::string &dir) {
  std::filesystem::create_directories(dir);
  const auto res = run_classification_experiment(cfg);
  {
    auto os = open_out(dir, "accuracy.csv");
    write_accuracy_csv(os, cfg, res);
  }
  {
    auto os = open_out(dir, "accuracy_vs_snr.dat");
    write_accuracy_table(os, cfg, res);
  }
  for (const auto &o : res.per_snr) {
    auto os = open_out(dir, "confusion_snr_" + format_snr(o.confusion.snr_db) + ".csv");
    write_confusion_csv(os, cfg, o.confusion);
  }
  write_manifest(dir, "run-classify", cfg);
}

}  // namespace rfdna
