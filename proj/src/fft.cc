// rfdna/fft.cc

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

#include "rfdna/fft.h"

#include <fftw3.h>

#include <map>
#include <tuple>
#include <mutex>
#include <utility>

namespace rfdna {

namespace {

// FFTW planning is not thread-safe, execution with the new-array interface
// is. Plans are in-place, unaligned, and live for the process lifetime.
fftw_plan plan_for(std::size_t n, int sign, std::size_t howmany = 1) {
  static std::mutex mu;
  static std::map<std::tuple<std::size_t, int, std::size_t>, fftw_plan> plans;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(n, sign, howmany);
  auto it = plans.find(key);
  if (it != plans.end()) return it->second;
  std::vector<cd> scratch(n * howmany);
  auto *buf = reinterpret_cast<fftw_complex *>(scratch.data());
  const int len = static_cast<int>(n);
  fftw_plan p = fftw_plan_many_dft(1, &len, static_cast<int>(howmany), buf, nullptr, 1, len,
                                   buf, nullptr, 1, len, sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (p == nullptr) throw std::runtime_error("fftw: planning failed");
  plans.emplace(key, p);
  return p;
}

void execute(std::span<cd> x, int sign) {
  if (x.empty()) return;
  auto *buf = reinterpret_cast<fftw_complex *>(x.data());
  fftw_execute_dft(plan_for(x.size(), sign), buf, buf);
}

}  // namespace

void dft_inplace(std::span<cd> x) { execute(x, FFTW_FORWARD); }

void dft_rows_inplace(std::span<cd> x, std::size_t n) {
  if (n == 0 || x.size() % n != 0)
    throw std::invalid_argument("dft_rows_inplace: length is not a multiple of n");
  if (x.empty()) return;
  auto *buf = reinterpret_cast<fftw_complex *>(x.data());
  fftw_execute_dft(plan_for(n, FFTW_FORWARD, x.size() / n), buf, buf);
}

void idft_inplace(std::span<cd> x) {
  execute(x, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(x.size());
  for (auto &v : x) v *= scale;
}

std::vector<cd> dft(std::span<const cd> x) {
  std::vector<cd> out(x.begin(), x.end());
  dft_inplace(out);
  return out;
}

std::vector<cd> idft(std::span<const cd> x) {
  std::vector<cd> out(x.begin(), x.end());
  idft_inplace(out);
  return out;
}

}  // namespace rfdna
