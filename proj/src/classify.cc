// rfdna/classify.cc

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

#include "rfdna/classify.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rfdna {

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string to_string(ClassifierKind k) {
  return k == ClassifierKind::kMdaMl ? "mdaml" : "grlvqi";
}

ClassifierKind parse_classifier(const std::string &s) {
  if (s == "mdaml" || s == "mda" || s == "MDA/ML") return ClassifierKind::kMdaMl;
  if (s == "grlvqi" || s == "GRLVQI") return ClassifierKind::kGrlvqi;
  throw std::invalid_argument("unknown classifier '" + s + "'");
}

int Dataset::n_classes() const {
  return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

void Dataset::validate() const {
  if (labels.empty()) throw std::invalid_argument("dataset: no samples");
  if (static_cast<std::size_t>(X.rows()) != labels.size())
    throw std::invalid_argument("dataset: label count does not match rows");
  if (X.cols() == 0) throw std::invalid_argument("dataset: no features");
  for (int l : labels)
    if (l < 0) throw std::invalid_argument("dataset: negative label");
  if (!X.allFinite()) throw std::invalid_argument("dataset: non-finite feature");
}

void Standardizer::fit(const MatrixXd &X) {
  const double n = static_cast<double>(X.rows());
  mean = X.colwise().mean().transpose();
  scale.resize(X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double var = (X.col(j).array() - mean(j)).square().sum() / n;
    const double sd = std::sqrt(var);
    scale(j) = sd > 1e-12 * std::max(1.0, std::abs(mean(j))) ? sd : 1.0;
  }
}

MatrixXd Standardizer::apply(const MatrixXd &X) const {
  if (X.cols() != mean.size()) throw std::invalid_argument("standardizer: dimension mismatch");
  return (X.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array();
}

VectorXd Standardizer::apply(std::span<const double> x) const {
  if (static_cast<Eigen::Index>(x.size()) != mean.size())
    throw std::invalid_argument("standardizer: dimension mismatch");
  const Eigen::Map<const VectorXd> v(x.data(), static_cast<Eigen::Index>(x.size()));
  return (v - mean).array() / scale.array();
}

namespace {

std::vector<std::size_t> class_counts(const std::vector<int> &labels, int n_classes) {
  std::vector<std::size_t> n(static_cast<std::size_t>(n_classes), 0);
  for (int l : labels) ++n[static_cast<std::size_t>(l)];
  return n;
}

// Lower Cholesky factor; std::domain_error when A is not numerically PD.
Eigen::LLT<MatrixXd> checked_llt(const MatrixXd &A, const char *what) {
  Eigen::LLT<MatrixXd> llt(A);
  if (llt.info() != Eigen::Success) throw std::domain_error(std::string(what) + " is singular");
  const VectorXd d = MatrixXd(llt.matrixL()).diagonal();
  if (d.minCoeff() <= 1e-7 * d.maxCoeff())
    throw std::domain_error(std::string(what) + " is numerically singular");
  return llt;
}

struct Scatter {
  MatrixXd within, between;
};

Scatter scatter(const MatrixXd &Y, const std::vector<int> &labels, int n_classes) {
  const auto n = class_counts(labels, n_classes);
  MatrixXd means = MatrixXd::Zero(n_classes, Y.cols());
  for (Eigen::Index i = 0; i < Y.rows(); ++i) means.row(labels[i]) += Y.row(i);
  for (int c = 0; c < n_classes; ++c)
    if (n[c]) means.row(c) /= static_cast<double>(n[c]);
  const VectorXd mu = Y.colwise().mean().transpose();
  MatrixXd centered = Y;
  for (Eigen::Index i = 0; i < Y.rows(); ++i) centered.row(i) -= means.row(labels[i]);
  Scatter s;
  s.within = centered.transpose() * centered;
  s.between = MatrixXd::Zero(Y.cols(), Y.cols());
  for (int c = 0; c < n_classes; ++c) {
    const VectorXd d = means.row(c).transpose() - mu;
    s.between += static_cast<double>(n[c]) * d * d.transpose();
  }
  return s;
}

}  // namespace

void MdaModel::prepare() {
  chol_factors.clear();
  log_dets.clear();
  for (const auto &S : class_covariances) {
    const auto llt = checked_llt(S, "class covariance");
    MatrixXd L = llt.matrixL();
    chol_factors.push_back(L);
    log_dets.push_back(2.0 * L.diagonal().array().log().sum());
  }
}

MdaModel mda_fit(const Dataset &data, double regularization) {
  data.validate();
  if (!(regularization >= 0.0)) throw std::invalid_argument("mda_fit: regularization < 0");
  const int C = data.n_classes();
  if (C < 2) throw std::invalid_argument("mda_fit: need at least two classes");
  const auto counts = class_counts(data.labels, C);
  for (auto c : counts)
    if (c < static_cast<std::size_t>(C))
      throw std::invalid_argument("mda_fit: every class needs at least N_D samples");

  MdaModel model;
  model.regularization = regularization;
  model.standardizer.fit(data.X);
  const MatrixXd Xs = model.standardizer.apply(data.X);
  const Eigen::Index d = Xs.cols();
  const Eigen::Index n = Xs.rows();

  MatrixXd means = MatrixXd::Zero(C, d);
  for (Eigen::Index i = 0; i < n; ++i) means.row(data.labels[i]) += Xs.row(i);
  for (int c = 0; c < C; ++c) means.row(c) /= static_cast<double>(counts[c]);
  const VectorXd mu = Xs.colwise().mean().transpose();

  MatrixXd centered = Xs;
  for (Eigen::Index i = 0; i < n; ++i) centered.row(i) -= means.row(data.labels[i]);
  MatrixXd Sw = MatrixXd::Zero(d, d);
  Sw.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose());
  Sw = Sw.selfadjointView<Eigen::Lower>();
  if (regularization > 0.0) {
    const double tr = Sw.trace();
    Sw.diagonal().array() += regularization * (tr > 0.0 ? tr / static_cast<double>(d) : 1.0);
  }

  // S_b = B B^T has rank <= C - 1. With Y = S_w^-1 B and M = B^T Y, each
  // eigenpair (lambda, w) of M gives v = Y w with S_w^-1 S_b v = lambda v.
  MatrixXd B(d, C);
  for (int c = 0; c < C; ++c)
    B.col(c) = std::sqrt(static_cast<double>(counts[c])) * (means.row(c).transpose() - mu);
  const auto llt = checked_llt(Sw, "within-class scatter");
  const MatrixXd Y = llt.solve(B);
  const MatrixXd M = B.transpose() * Y;
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(0.5 * (M + M.transpose()));
  model.projection.resize(d, C - 1);
  for (int j = 0; j < C - 1; ++j) {
    const Eigen::Index col = C - 1 - j;  // eigenvalues ascend
    VectorXd v = Y * eig.eigenvectors().col(col);
    const double lambda = eig.eigenvalues()(col);
    // v^T S_w v = lambda
    if (lambda > 1e-300) v /= std::sqrt(lambda);
    else if (v.norm() > 0.0) v.normalize();
    model.projection.col(j) = v;
  }

  const MatrixXd Z = Xs * model.projection;
  model.class_means.assign(C, VectorXd::Zero(C - 1));
  model.class_covariances.assign(C, MatrixXd::Zero(C - 1, C - 1));
  for (Eigen::Index i = 0; i < n; ++i) model.class_means[data.labels[i]] += Z.row(i).transpose();
  for (int c = 0; c < C; ++c) model.class_means[c] /= static_cast<double>(counts[c]);
  for (Eigen::Index i = 0; i < n; ++i) {
    const VectorXd e = Z.row(i).transpose() - model.class_means[data.labels[i]];
    model.class_covariances[data.labels[i]] += e * e.transpose();
  }
  for (int c = 0; c < C; ++c) {
    auto &S = model.class_covariances[c];
    S /= static_cast<double>(std::max<std::size_t>(1, counts[c] - 1));
    const double tr = S.trace();
    S.diagonal().array() +=
        tr > 0.0 ? 1e-6 * tr / static_cast<double>(C - 1) : 1e-12;
  }
  model.priors.resize(C);
  for (int c = 0; c < C; ++c)
    model.priors[c] = static_cast<double>(counts[c]) / static_cast<double>(n);
  model.prepare();
  return model;
}

MlDecision ml_classify(const MdaModel &model, std::span<const double> fp) {
  if (fp.size() != model.n_features())
    throw std::invalid_argument("ml_classify: fingerprint length does not match the model");
  if (model.chol_factors.size() != model.n_classes())
    throw std::logic_error("ml_classify: model not prepared");
  const VectorXd y = model.projection.transpose() * model.standardizer.apply(fp);
  const double k = static_cast<double>(y.size());
  MlDecision out;
  out.log_likelihoods.resize(model.n_classes());
  for (std::size_t c = 0; c < model.n_classes(); ++c) {
    const VectorXd z = model.chol_factors[c].triangularView<Eigen::Lower>().solve(
        y - model.class_means[c]);
    out.log_likelihoods[c] = -0.5 * (z.squaredNorm() + model.log_dets[c] +
                                     k * std::log(2.0 * kPi)) +
                             std::log(model.priors[c]);
  }
  out.label = static_cast<int>(std::max_element(out.log_likelihoods.begin(),
                                                out.log_likelihoods.end()) -
                               out.log_likelihoods.begin());
  return out;
}

double fisher_ratio(const MatrixXd &Y, const std::vector<int> &labels) {
  const int C = *std::max_element(labels.begin(), labels.end()) + 1;
  const Scatter s = scatter(Y, labels, C);
  return s.within.ldlt().solve(s.between).trace();
}

GrlvqiModel grlvqi_init(const Dataset &data, const GrlvqiParams &params, Rng &rng) {
  data.validate();
  if (params.prototypes_per_class == 0)
    throw std::invalid_argument("grlvqi: need at least one prototype per class");
  if (!(params.lr_prototype >= 0.0) || !(params.lr_relevance >= 0.0) ||
      !(params.steepness > 0.0) || !(params.init_jitter >= 0.0))
    throw std::invalid_argument("grlvqi: bad learning parameters");
  const int C = data.n_classes();
  if (C < 2) throw std::invalid_argument("grlvqi: need at least two classes");
  const auto counts = class_counts(data.labels, C);
  for (auto c : counts)
    if (c == 0) throw std::invalid_argument("grlvqi: empty class");

  bool identical = true;
  for (Eigen::Index i = 1; i < data.X.rows() && identical; ++i)
    identical = data.X.row(i) == data.X.row(0);
  if (identical) throw std::invalid_argument("grlvqi: all training samples identical");

  GrlvqiModel model;
  model.params = params;
  model.standardizer.fit(data.X);
  const MatrixXd Xs = model.standardizer.apply(data.X);
  const Eigen::Index d = Xs.cols();

  MatrixXd means = MatrixXd::Zero(C, d);
  for (Eigen::Index i = 0; i < Xs.rows(); ++i) means.row(data.labels[i]) += Xs.row(i);
  for (int c = 0; c < C; ++c) means.row(c) /= static_cast<double>(counts[c]);

  const auto P = static_cast<Eigen::Index>(C * params.prototypes_per_class);
  model.prototypes.resize(P, d);
  model.prototype_labels.resize(P);
  for (int c = 0, p = 0; c < C; ++c)
    for (std::size_t j = 0; j < params.prototypes_per_class; ++j, ++p) {
      model.prototype_labels[p] = c;
      for (Eigen::Index i = 0; i < d; ++i)
        model.prototypes(p, i) = means(c, i) + params.init_jitter * standard_normal(rng);
    }
  model.relevances = VectorXd::Constant(d, 1.0 / static_cast<double>(d));
  return model;
}

GrlvqiModel grlvqi_fit(const Dataset &data, const GrlvqiParams &params, Rng &rng,
                       const GrlvqiObserver &observer) {
  if (params.epochs == 0) throw std::invalid_argument("grlvqi_fit: need at least one epoch");
  GrlvqiModel model = grlvqi_init(data, params, rng);
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> Xs =
      model.standardizer.apply(data.X);
  const Eigen::Index d = Xs.cols();
  const auto n = static_cast<std::size_t>(Xs.rows());
  const auto P = model.prototypes.rows();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  VectorXd dist(P), dJv(d), dKv(d);
  const double total_steps = static_cast<double>(params.epochs * n);
  std::size_t step = 0;

  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    shuffle(order.begin(), order.end(), rng);
    for (std::size_t s = 0; s < n; ++s, ++step) {
      const std::size_t i = order[s];
      const auto x = Xs.row(i);
      const int y = data.labels[i];
      Eigen::Index J = -1, K = -1;
      double dJ = 0.0, dK = 0.0;
      for (Eigen::Index p = 0; p < P; ++p) {
        const double dp =
            ((model.prototypes.row(p) - x).array().square() * model.relevances.transpose().array()).sum();
        if (model.prototype_labels[p] == y) {
          if (J < 0 || dp < dJ) { J = p; dJ = dp; }
        } else if (K < 0 || dp < dK) {
          K = p;
          dK = dp;
        }
      }
      const double denom = dJ + dK;
      if (!(denom > 0.0)) continue;

      const double decay = 1.0 - static_cast<double>(step) / total_steps;
      const double eps_w = params.lr_prototype * decay;
      const double eps_l = params.lr_relevance * decay;
      const double mu = (dJ - dK) / denom;
      const double sg = 1.0 / (1.0 + std::exp(-params.steepness * mu));
      const double g = params.steepness * sg * (1.0 - sg);
      const double d2 = denom * denom;

      dJv = (x - model.prototypes.row(J)).transpose();
      dKv = (x - model.prototypes.row(K)).transpose();
      model.prototypes.row(J) +=
          (eps_w * g * 4.0 * dK / d2) * (model.relevances.array() * dJv.array()).matrix().transpose();
      model.prototypes.row(K) -=
          (eps_w * g * 4.0 * dJ / d2) * (model.relevances.array() * dKv.array()).matrix().transpose();

      model.relevances.array() -=
          eps_l * g *
          ((2.0 * dK / d2) * dJv.array().square() - (2.0 * dJ / d2) * dKv.array().square());
      model.relevances = model.relevances.cwiseMax(0.0);
      const double sum = model.relevances.sum();
      if (sum > 0.0 && std::isfinite(sum))
        model.relevances /= sum;
      else
        model.relevances.setConstant(1.0 / static_cast<double>(d));
    }
    if (!model.prototypes.allFinite() || !model.relevances.allFinite())
      throw NonFiniteError("grlvqi_fit: training diverged");
    if (observer) observer(epoch, model);
  }
  return model;
}

int grlvqi_classify(const GrlvqiModel &model, std::span<const double> fp) {
  if (fp.size() != model.n_features())
    throw std::invalid_argument("grlvqi_classify: fingerprint length does not match the model");
  const VectorXd x = model.standardizer.apply(fp);
  Eigen::Index best = 0;
  double best_d = 0.0;
  for (Eigen::Index p = 0; p < model.prototypes.rows(); ++p) {
    const double dp = ((model.prototypes.row(p).transpose() - x).array().square() *
                       model.relevances.array())
                          .sum();
    if (p == 0 || dp < best_d) {
      best = p;
      best_d = dp;
    }
  }
  return model.prototype_labels[best];
}

}  // namespace rfdna
