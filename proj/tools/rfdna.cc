// rfdna/rfdna.cc

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

#include <CLI11.hpp>

#include <iostream>

#include "rfdna/config.h"
#include "rfdna/harness.h"

namespace {

struct Overrides {
  std::string config, out = "out";
  std::string estimator, equalizer, fingerprint, classifier, channel, snr, timing;
  std::uint64_t seed = 0;
  bool has_seed = false;
  bool paper_scale = false;
  std::size_t workers = 0;
};

void add_common(CLI::App *cmd, Overrides &o) {
  cmd->add_option("--config", o.config, "INI config file");
  cmd->add_option("--out", o.out, "output directory")->capture_default_str();
  cmd->add_option("--estimator", o.estimator, "ls|mmse|nm");
  cmd->add_option("--equalizer", o.equalizer, "zf|mmse");
  cmd->add_option("--fingerprint", o.fingerprint, "mag|phase");
  cmd->add_option("--classifier", o.classifier, "mdaml|grlvqi");
  cmd->add_option("--channel", o.channel, "l2|l3|l5|none");
  cmd->add_option("--snr", o.snr, "lo:step:hi in dB");
  cmd->add_option("--timing", o.timing, "ideal|sync (estimator comparison)");
  cmd->add_option_function<std::uint64_t>(
      "--seed", [&o](const std::uint64_t &s) { o.seed = s; o.has_seed = true; }, "master seed");
  cmd->add_flag("--paper-scale", o.paper_scale, "N_B=2000, N_z=10, 1000 estimation preambles");
  cmd->add_option("--workers", o.workers, "worker threads");
}

rfdna::ExperimentConfig resolve(const Overrides &o) {
  rfdna::ExperimentConfig cfg =
      o.config.empty() ? rfdna::ExperimentConfig{} : rfdna::load_config_file(o.config);
  if (o.paper_scale) cfg.apply_paper_scale();
  if (!o.estimator.empty()) cfg.estimator = rfdna::parse_estimator(o.estimator);
  if (!o.equalizer.empty()) cfg.equalizer = rfdna::parse_equalizer(o.equalizer);
  if (!o.fingerprint.empty()) cfg.fingerprint = rfdna::parse_surface_kind(o.fingerprint);
  if (!o.classifier.empty()) cfg.classifier = rfdna::parse_classifier(o.classifier);
  if (!o.channel.empty()) cfg.channel = rfdna::shipped_profile(o.channel);
  if (!o.snr.empty()) cfg.snr_grid = rfdna::parse_snr_grid(o.snr);
  if (!o.timing.empty()) cfg.est_timing = rfdna::parse_timing(o.timing);
  if (o.has_seed) cfg.master_seed = o.seed;
  if (o.workers) cfg.workers = o.workers;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"RF-DNA fingerprinting experiments"};
  app.require_subcommand(1);

  Overrides est_opts, cls_opts;
  auto *est = app.add_subcommand("run-est-compare", "channel estimator squared error vs SNR");
  add_common(est, est_opts);
  auto *cls = app.add_subcommand("run-classify", "classification accuracy vs SNR");
  add_common(cls, cls_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (est->parsed()) {
      const auto cfg = resolve(est_opts);
      rfdna::run_est_compare_to_dir(cfg, est_opts.out);
      std::cout << "wrote " << est_opts.out << "/est_compare.csv\n";
    } else if (cls->parsed()) {
      const auto cfg = resolve(cls_opts);
      rfdna::run_classify_to_dir(cfg, cls_opts.out);
      std::cout << "wrote " << cls_opts.out << "/accuracy.csv\n";
    }
  } catch (const std::exception &e) {
    std::cerr << "rfdna: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
