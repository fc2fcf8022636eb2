// rfdna/fft.h

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

#ifndef RFDNA_FFT_H_
#define RFDNA_FFT_H_

#include <span>
#include <vector>

#include "rfdna/baseband.h"

namespace rfdna {

// Thin wrappers over FFTW. Plans are created once per length and shared;
// execution is safe from any thread.
//
// Conventions: dft() is unnormalized, X(k) = sum_n x(n) exp(-j2pi kn/N);
// idft() carries the 1/N factor, so idft(dft(x)) == x.

std::vector<cd> dft(std::span<const cd> x);
std::vector<cd> idft(std::span<const cd> x);

/// In-place variants; `x` is overwritten with its transform.
void dft_inplace(std::span<cd> x);
void idft_inplace(std::span<cd> x);

/// Forward DFT of each consecutive length-n block of `x`.
void dft_rows_inplace(std::span<cd> x, std::size_t n);

}  // namespace rfdna

#endif  // RFDNA_FFT_H_
