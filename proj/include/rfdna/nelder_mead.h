// rfdna/nelder_mead.h

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

#ifndef RFDNA_NELDER_MEAD_H_
#define RFDNA_NELDER_MEAD_H_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rfdna/baseband.h"

namespace rfdna {

struct NmConfig {
  double rho = 1.0;    // reflection
  double chi = 2.0;    // expansion
  double gamma = 0.5;  // contraction
  double phi = 0.5;    // shrinkage
  // The spread test bounds the variance of the vertex values, so a
  // tolerance eps resolves the minimizer only to about eps^(1/4) on a
  // unit-curvature cost; 1e-16 keeps channel taps within 1e-3.
  double eps1 = 1e-16;  // function-value spread
  double eps2 = 1e-16;  // vertex motion between iterations
  std::size_t max_iterations = 0;  // 0 means 200 * d
  // Initial simplex step per coordinate: max(step_abs, step_rel * |x0_i|).
  double step_abs = 0.05;
  double step_rel = 0.05;

  /// Throws std::invalid_argument unless rho > 0, chi > 1, chi > rho,
  /// 0 < gamma < 1 and 0 < phi < 1 (and the tolerances are sane).
  void validate() const;
};

enum class NmTermination { kFunctionSpread, kVertexMotion, kMaxIterations };

std::string to_string(NmTermination t);

struct NmResult {
  std::vector<double> x;
  double f = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  NmTermination reason = NmTermination::kMaxIterations;
};

/// Carries the point at which the objective stopped being finite.
class NmNonFiniteError : public NonFiniteError {
 public:
  NmNonFiniteError(const std::string &msg, std::vector<double> point)
      : NonFiniteError(msg), point_(std::move(point)) {}
  const std::vector<double> &point() const { return point_; }

 private:
  std::vector<double> point_;
};

using Objective = std::function<double(std::span<const double>)>;

/// Nelder-Mead simplex minimization with Lagarias' acceptance rules. Both
/// stopping conditions are checked at the end of every iteration.
NmResult nelder_mead_minimize(const Objective &f, std::vector<double> x0,
                              const NmConfig &cfg = {});

}  // namespace rfdna

#endif  // RFDNA_NELDER_MEAD_H_
