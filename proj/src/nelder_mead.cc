// rfdna/nelder_mead.cc

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

#include "rfdna/nelder_mead.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace rfdna {

void NmConfig::validate() const {
  if (!(rho > 0.0)) throw std::invalid_argument("NmConfig: rho must be > 0");
  if (!(chi > 1.0)) throw std::invalid_argument("NmConfig: chi must be > 1");
  if (!(chi > rho)) throw std::invalid_argument("NmConfig: chi must exceed rho");
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("NmConfig: gamma must lie in (0, 1)");
  if (!(phi > 0.0 && phi < 1.0))
    throw std::invalid_argument("NmConfig: phi must lie in (0, 1)");
  if (!(eps1 >= 0.0) || !(eps2 >= 0.0))
    throw std::invalid_argument("NmConfig: tolerances must be >= 0");
  if (!(step_abs > 0.0) || !(step_rel >= 0.0))
    throw std::invalid_argument("NmConfig: bad initial step");
}

std::string to_string(NmTermination t) {
  switch (t) {
    case NmTermination::kFunctionSpread: return "function_spread";
    case NmTermination::kVertexMotion: return "vertex_motion";
    case NmTermination::kMaxIterations: return "max_iterations";
  }
  return "unknown";
}

namespace {

class Evaluator {
 public:
  explicit Evaluator(const Objective &f) : f_(f) {}

  double operator()(const std::vector<double> &x) {
    ++count;
    const double v = f_(std::span<const double>(x));
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "nelder_mead: non-finite objective at (";
      for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
      os << ")";
      throw NmNonFiniteError(os.str(), x);
    }
    return v;
  }

  std::size_t count = 0;

 private:
  const Objective &f_;
};

}  // namespace

NmResult nelder_mead_minimize(const Objective &f, std::vector<double> x0,
                              const NmConfig &cfg) {
  cfg.validate();
  const std::size_t d = x0.size();
  if (d == 0) throw std::invalid_argument("nelder_mead: empty starting point");
  const std::size_t max_iter = cfg.max_iterations ? cfg.max_iterations : 200 * d;
  Evaluator eval(f);

  std::vector<std::vector<double>> v(d + 1, x0);
  for (std::size_t i = 0; i < d; ++i)
    v[i + 1][i] += std::max(cfg.step_abs, cfg.step_rel * std::abs(x0[i]));
  std::vector<double> fv(d + 1);
  for (std::size_t i = 0; i <= d; ++i) fv[i] = eval(v[i]);

  std::vector<std::size_t> order(d + 1);
  auto sort_simplex = [&]() {
    std::iota(order.begin(), order.end(), 0);
    // Stable, so among equal values the older vertex keeps the better rank.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    std::vector<std::vector<double>> nv(d + 1);
    std::vector<double> nf(d + 1);
    for (std::size_t i = 0; i <= d; ++i) {
      nv[i] = std::move(v[order[i]]);
      nf[i] = fv[order[i]];
    }
    v = std::move(nv);
    fv = std::move(nf);
  };

  auto along = [&](const std::vector<double> &c, const std::vector<double> &w,
                   double t) {
    // c + t (c - w)
    std::vector<double> p(d);
    for (std::size_t j = 0; j < d; ++j) p[j] = c[j] + t * (c[j] - w[j]);
    return p;
  };

  NmResult res;
  sort_simplex();
  std::vector<double> centroid(d);
  std::vector<std::vector<double>> prev;

  std::size_t k = 0;
  while (true) {
    if (k >= max_iter) {
      res.reason = NmTermination::kMaxIterations;
      break;
    }
    prev = v;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) centroid[j] += v[i][j];
    for (double &c : centroid) c /= static_cast<double>(d);

    const auto &worst = v[d];
    const auto xr = along(centroid, worst, cfg.rho);
    const double fr = eval(xr);

    bool shrink = false;
    if (fr < fv[0]) {
      auto xe = along(centroid, worst, cfg.rho * cfg.chi);
      const double fe = eval(xe);
      if (fe < fr) {
        v[d] = std::move(xe);
        fv[d] = fe;
      } else {
        v[d] = xr;
        fv[d] = fr;
      }
    } else if (fr < fv[d - 1]) {
      v[d] = xr;
      fv[d] = fr;
    } else if (fr < fv[d]) {
      auto xc = along(centroid, worst, cfg.rho * cfg.gamma);
      const double fc = eval(xc);
      if (fc <= fr) {
        v[d] = std::move(xc);
        fv[d] = fc;
      } else {
        shrink = true;
      }
    } else {
      auto xcc = along(centroid, worst, -cfg.gamma);
      const double fcc = eval(xcc);
      if (fcc < fv[d]) {
        v[d] = std::move(xcc);
        fv[d] = fcc;
      } else {
        shrink = true;
      }
    }

    if (shrink) {
      for (std::size_t i = 1; i <= d; ++i) {
        for (std::size_t j = 0; j < d; ++j)
          v[i][j] = v[0][j] + cfg.phi * (v[i][j] - v[0][j]);
        fv[i] = eval(v[i]);
      }
    }

    sort_simplex();
    ++k;

    const double fbar =
        std::accumulate(fv.begin(), fv.end(), 0.0) / static_cast<double>(d + 1);
    double spread = 0.0;
    for (double x : fv) spread += (x - fbar) * (x - fbar);
    spread /= static_cast<double>(d);
    if (spread < cfg.eps1) {
      res.reason = NmTermination::kFunctionSpread;
      break;
    }

    // All d+1 ordered vertices; the worst alone moves on most iterations.
    double motion = 0.0;
    for (std::size_t i = 0; i <= d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        const double e = v[i][j] - prev[i][j];
        motion += e * e;
      }
    motion /= static_cast<double>(d);
    if (motion < cfg.eps2) {
      res.reason = NmTermination::kVertexMotion;
      break;
    }
  }

  res.x = v[0];
  res.f = fv[0];
  res.iterations = k;
  res.evaluations = eval.count;
  return res;
}

}  // namespace rfdna
