// rfdna/io.h

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

#ifndef RFDNA_IO_H_
#define RFDNA_IO_H_

#include <istream>
#include <ostream>
#include <string>

#include "rfdna/baseband.h"
#include "rfdna/classify.h"

namespace rfdna {

/// "RFDNA1 <sample_rate_hz> <n_samples>\n" then interleaved float32 I/Q,
/// little-endian.
void write_signal_dump(std::ostream &os, const ComplexBaseband &s);
ComplexBaseband read_signal_dump(std::istream &is);

// Model container: magic "RFDNAMDL", uint32 version, method tag, then
// uint64 dims and float64 row-major matrices, all little-endian.
inline constexpr std::uint32_t kModelFormatVersion = 1;

void save_model(std::ostream &os, const MdaModel &m);
void save_model(std::ostream &os, const GrlvqiModel &m);
/// Throws std::runtime_error on a bad magic, version or method tag.
MdaModel load_mda_model(std::istream &is);
GrlvqiModel load_grlvqi_model(std::istream &is);

}  // namespace rfdna

#endif  // RFDNA_IO_H_
