// rfdna/classify.h

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

#ifndef RFDNA_CLASSIFY_H_
#define RFDNA_CLASSIFY_H_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rfdna/baseband.h"
#include "rfdna/random.h"

namespace rfdna {

enum class ClassifierKind { kMdaMl, kGrlvqi };

std::string to_string(ClassifierKind k);
/// Accepts "mdaml" and "grlvqi".
ClassifierKind parse_classifier(const std::string &s);

/// Training data: one sample per row, labels in [0, n_classes).
struct Dataset {
  Eigen::MatrixXd X;
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
  std::size_t n_features() const { return static_cast<std::size_t>(X.cols()); }
  int n_classes() const;
  void validate() const;
};

/// Per-feature z-score from training statistics. Constant features get scale 1.
struct Standardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;

  void fit(const Eigen::MatrixXd &X);
  Eigen::MatrixXd apply(const Eigen::MatrixXd &X) const;
  Eigen::VectorXd apply(std::span<const double> x) const;
};

struct MdaModel {
  Standardizer standardizer;
  Eigen::MatrixXd projection;  // N_f x (N_D - 1)
  std::vector<Eigen::VectorXd> class_means;
  std::vector<Eigen::MatrixXd> class_covariances;
  std::vector<double> priors;
  double regularization = 0.0;

  // Derived from the covariances by prepare().
  std::vector<Eigen::MatrixXd> chol_factors;  // lower L with L L^T = Sigma
  std::vector<double> log_dets;

  std::size_t n_classes() const { return priors.size(); }
  std::size_t n_features() const { return static_cast<std::size_t>(projection.rows()); }
  void prepare();
};

/// Fisher projection of the standardized data onto the top N_D - 1
/// generalized eigenvectors of S_b v = lambda S_w v, then per-class Gaussians
/// in the projected space. S_w is ridged by regularization * tr(S_w) / N_f;
/// with regularization = 0 a singular S_w throws std::domain_error.
MdaModel mda_fit(const Dataset &data, double regularization);

struct MlDecision {
  int label = 0;
  std::vector<double> log_likelihoods;  // includes log prior
};

MlDecision ml_classify(const MdaModel &model, std::span<const double> fp);

/// trace(S_w^-1 S_b) of the already projected data `Y` (one row per sample).
double fisher_ratio(const Eigen::MatrixXd &Y, const std::vector<int> &labels);

struct GrlvqiParams {
  std::size_t prototypes_per_class = 2;
  std::size_t epochs = 100;
  double lr_prototype = 0.05;
  double lr_relevance = 0.005;
  double steepness = 2.0;
  double init_jitter = 0.1;  // prototype jitter in standardized units
};

struct GrlvqiModel {
  Standardizer standardizer;
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> prototypes;  // one per row
  std::vector<int> prototype_labels;
  Eigen::VectorXd relevances;
  GrlvqiParams params;

  std::size_t n_features() const { return static_cast<std::size_t>(prototypes.cols()); }
};

/// Standardizer, prototypes at the class means plus seeded jitter, and
/// uniform relevances; the state grlvqi_fit starts from.
GrlvqiModel grlvqi_init(const Dataset &data, const GrlvqiParams &params, Rng &rng);

/// Called after every epoch with the epoch index and the current model.
using GrlvqiObserver = std::function<void(std::size_t, const GrlvqiModel &)>;

/// Generalized relevance LVQ on a sigmoid of mu = (d_J - d_K) / (d_J + d_K),
/// d(x, w) = sum_i lambda_i (x_i - w_i)^2, with learn rates decaying
/// linearly to zero. Relevances are clipped at 0 and renormalized after every
/// update.
GrlvqiModel grlvqi_fit(const Dataset &data, const GrlvqiParams &params, Rng &rng,
                       const GrlvqiObserver &observer = {});

/// Label of the nearest prototype; lowest prototype index on ties.
int grlvqi_classify(const GrlvqiModel &model, std::span<const double> fp);

}  // namespace rfdna

#endif  // RFDNA_CLASSIFY_H_
