// rfdna/io.cc

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

#include "rfdna/io.h"

#include <bit>
#include <cstring>
#include <sstream>

namespace rfdna {

static_assert(std::endian::native == std::endian::little,
              "the dump formats assume a little-endian host");

namespace {

template <typename T>
void put(std::ostream &os, T v) {
  os.write(reinterpret_cast<const char *>(&v), sizeof v);
}

template <typename T>
T get(std::istream &is) {
  T v{};
  if (!is.read(reinterpret_cast<char *>(&v), sizeof v))
    throw std::runtime_error("unexpected end of stream");
  return v;
}

void put_matrix(std::ostream &os, const Eigen::MatrixXd &m) {
  put<std::uint64_t>(os, static_cast<std::uint64_t>(m.rows()));
  put<std::uint64_t>(os, static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) put<double>(os, m(r, c));
}

Eigen::MatrixXd get_matrix(std::istream &is) {
  const auto rows = get<std::uint64_t>(is);
  const auto cols = get<std::uint64_t>(is);
  if (rows > (1u << 24) || cols > (1u << 24)) throw std::runtime_error("model: implausible dims");
  Eigen::MatrixXd m(rows, cols);
  for (std::uint64_t r = 0; r < rows; ++r)
    for (std::uint64_t c = 0; c < cols; ++c) m(r, c) = get<double>(is);
  return m;
}

void put_vector(std::ostream &os, const Eigen::VectorXd &v) { put_matrix(os, v); }
Eigen::VectorXd get_vector(std::istream &is) {
  Eigen::MatrixXd m = get_matrix(is);
  if (m.cols() != 1) throw std::runtime_error("model: expected a column vector");
  return m.col(0);
}

void put_header(std::ostream &os, const char tag[8]) {
  os.write("RFDNAMDL", 8);
  put<std::uint32_t>(os, kModelFormatVersion);
  os.write(tag, 8);
}

void expect_header(std::istream &is, const char tag[8]) {
  char magic[8], got[8];
  if (!is.read(magic, 8) || std::memcmp(magic, "RFDNAMDL", 8) != 0)
    throw std::runtime_error("model: bad magic");
  if (get<std::uint32_t>(is) != kModelFormatVersion)
    throw std::runtime_error("model: unsupported version");
  if (!is.read(got, 8) || std::memcmp(got, tag, 8) != 0)
    throw std::runtime_error("model: method tag mismatch");
}

}  // namespace

void write_signal_dump(std::ostream &os, const ComplexBaseband &s) {
  std::ostringstream head;
  head.precision(17);
  head << "RFDNA1 " << s.sample_rate << ' ' << s.size() << '\n';
  os << head.str();
  for (const cd &v : s.samples) {
    put<float>(os, static_cast<float>(v.real()));
    put<float>(os, static_cast<float>(v.imag()));
  }
}

ComplexBaseband read_signal_dump(std::istream &is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("signal dump: missing header");
  std::istringstream head(line);
  std::string magic;
  double rate = 0.0;
  std::size_t n = 0;
  if (!(head >> magic >> rate >> n) || magic != "RFDNA1")
    throw std::runtime_error("signal dump: bad header");
  ComplexBaseband s;
  s.sample_rate = rate;
  s.samples.resize(n);
  for (auto &v : s.samples) {
    const float re = get<float>(is);
    const float im = get<float>(is);
    v = cd(re, im);
  }
  return s;
}

void save_model(std::ostream &os, const MdaModel &m) {
  put_header(os, "MDAML\0\0\0");
  put<double>(os, m.regularization);
  put_vector(os, m.standardizer.mean);
  put_vector(os, m.standardizer.scale);
  put_matrix(os, m.projection);
  put<std::uint64_t>(os, m.priors.size());
  for (std::size_t c = 0; c < m.priors.size(); ++c) {
    put<double>(os, m.priors[c]);
    put_vector(os, m.class_means[c]);
    put_matrix(os, m.class_covariances[c]);
  }
}

MdaModel load_mda_model(std::istream &is) {
  expect_header(is, "MDAML\0\0\0");
  MdaModel m;
  m.regularization = get<double>(is);
  m.standardizer.mean = get_vector(is);
  m.standardizer.scale = get_vector(is);
  m.projection = get_matrix(is);
  const auto C = get<std::uint64_t>(is);
  if (C > 4096) throw std::runtime_error("model: implausible class count");
  for (std::uint64_t c = 0; c < C; ++c) {
    m.priors.push_back(get<double>(is));
    m.class_means.push_back(get_vector(is));
    m.class_covariances.push_back(get_matrix(is));
  }
  m.prepare();
  return m;
}

void save_model(std::ostream &os, const GrlvqiModel &m) {
  put_header(os, "GRLVQI\0\0");
  put_vector(os, m.standardizer.mean);
  put_vector(os, m.standardizer.scale);
  put_matrix(os, m.prototypes);
  Eigen::VectorXd labels(static_cast<Eigen::Index>(m.prototype_labels.size()));
  for (std::size_t i = 0; i < m.prototype_labels.size(); ++i) labels(i) = m.prototype_labels[i];
  put_vector(os, labels);
  put_vector(os, m.relevances);
  put<std::uint64_t>(os, m.params.prototypes_per_class);
  put<std::uint64_t>(os, m.params.epochs);
  put<double>(os, m.params.lr_prototype);
  put<double>(os, m.params.lr_relevance);
  put<double>(os, m.params.steepness);
  put<double>(os, m.params.init_jitter);
}

GrlvqiModel load_grlvqi_model(std::istream &is) {
  expect_header(is, "GRLVQI\0\0");
  GrlvqiModel m;
  m.standardizer.mean = get_vector(is);
  m.standardizer.scale = get_vector(is);
  m.prototypes = get_matrix(is);
  const Eigen::VectorXd labels = get_vector(is);
  for (Eigen::Index i = 0; i < labels.size(); ++i) m.prototype_labels.push_back(static_cast<int>(labels(i)));
  m.relevances = get_vector(is);
  m.params.prototypes_per_class = get<std::uint64_t>(is);
  m.params.epochs = get<std::uint64_t>(is);
  m.params.lr_prototype = get<double>(is);
  m.params.lr_relevance = get<double>(is);
  m.params.steepness = get<double>(is);
  m.params.init_jitter = get<double>(is);
  if (static_cast<std::size_t>(m.prototypes.rows()) != m.prototype_labels.size())
    throw std::runtime_error("model: prototype/label count mismatch");
  return m;
}

}  // namespace rfdna
