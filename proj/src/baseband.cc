// rfdna/baseband.cc

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

#include "rfdna/baseband.h"

#include <cmath>

namespace rfdna {

bool all_finite(const std::vector<cd> &v) {
  for (const auto &x : v)
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
  return true;
}

double mean_power(const std::vector<cd> &v) {
  if (v.empty()) return 0.0;
  double acc = 0.0;
  for (const auto &x : v) acc += std::norm(x);
  return acc / static_cast<double>(v.size());
}

void ComplexBaseband::validate(const char *what) const {
  if (!(sample_rate > 0.0) || !std::isfinite(sample_rate))
    throw std::invalid_argument(std::string(what) + ": sample rate must be positive");
  if (samples.empty()) throw std::invalid_argument(std::string(what) + ": empty");
  if (!all_finite(samples))
    throw std::invalid_argument(std::string(what) + ": non-finite sample");
}

}  // namespace rfdna
