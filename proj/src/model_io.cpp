/*
 * Copyright 2026 The MMC Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "mmc/model_io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace mmc::kernels {

namespace {

std::string fmt(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

template <typename Derived>
void write_rows(std::ostream& out, const Eigen::MatrixBase<Derived>& m) {
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (c) out << ' ';
      out << fmt(m(r, c));
    }
    out << '\n';
  }
}

void write_row_indices(std::ostream& out, const std::vector<Index>& rows) {
  out << "rows " << rows.size() << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) out << (i ? " " : "") << rows[i];
  out << '\n';
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::string word() {
    std::string w;
    if (!(in_ >> w)) throw DataError("model file truncated");
    return w;
  }

  void expect(const std::string& key) {
    const auto w = word();
    if (w != key) throw DataError("model file: expected '" + key + "', found '" + w + "'");
  }

  double real() {
    const auto w = word();
    double v = 0;
    const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc() || ptr != w.data() + w.size()) {
      if (w == "inf") return std::numeric_limits<double>::infinity();
      throw DataError("model file: bad number '" + w + "'");
    }
    return v;
  }

  template <typename Int>
  Int integer() {
    const auto w = word();
    Int v = 0;
    const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc() || ptr != w.data() + w.size()) {
      throw DataError("model file: bad integer '" + w + "'");
    }
    return v;
  }

  std::vector<Index> row_indices() {
    expect("rows");
    const auto count = integer<Index>();
    std::vector<Index> rows(static_cast<std::size_t>(count));
    for (auto& r : rows) r = integer<Index>();
    return rows;
  }

  template <typename Matrix>
  void fill(Matrix& m) {
    for (Index r = 0; r < m.rows(); ++r)
      for (Index c = 0; c < m.cols(); ++c) m(r, c) = real();
  }

 private:
  std::istream& in_;
};

}  // namespace

void save_model(std::ostream& out, const IKModel& model) {
  out << "mmc-model " << kModelFormatVersion << '\n'
      << "kind ik\n"
      << "mechanism " << mechanism_name(model.mechanism) << '\n'
      << "t " << model.t << '\n'
      << "psi " << model.psi << '\n'
      << "seed " << model.seed << '\n'
      << "dim " << model.dim() << '\n';
  write_row_indices(out, model.center_rows);
  out << "centers\n";
  write_rows(out, model.centers);
  if (model.mechanism == Mechanism::hypersphere) {
    out << "radii_sq\n";
    write_rows(out, model.radii_sq.transpose());
  }
  out << "end\n";
}

void save_model(std::ostream& out, const NystromModel& model) {
  out << "mmc-model " << kModelFormatVersion << '\n'
      << "kind nystrom\n"
      << "sigma " << fmt(model.sigma) << '\n'
      << "seed " << model.seed << '\n'
      << "dim " << model.dim() << '\n'
      << "landmarks " << model.landmarks.rows() << '\n';
  write_row_indices(out, model.landmark_rows);
  out << "points\n";
  write_rows(out, model.landmarks);
  out << "whitening\n";
  write_rows(out, model.whitening);
  out << "end\n";
}

AnyModel load_model(std::istream& in) {
  Reader r(in);
  r.expect("mmc-model");
  const int version = r.integer<int>();
  if (version != kModelFormatVersion) {
    throw DataError("unsupported model format version " + std::to_string(version));
  }
  r.expect("kind");
  const auto kind = r.word();
  if (kind == "ik") {
    IKModel m;
    r.expect("mechanism");
    const auto mech = parse_mechanism(r.word());
    if (!mech) throw DataError("model file: unknown mechanism");
    m.mechanism = *mech;
    r.expect("t");
    m.t = r.integer<int>();
    r.expect("psi");
    m.psi = r.integer<int>();
    r.expect("seed");
    m.seed = r.integer<std::uint64_t>();
    r.expect("dim");
    const auto dim = r.integer<Index>();
    if (m.t < 1 || m.psi < 1 || m.psi > kMaxPsi || dim < 1) {
      throw DataError("model file: invalid IK shape");
    }
    m.center_rows = r.row_indices();
    if (static_cast<Index>(m.center_rows.size()) != m.feature_dim()) {
      throw DataError("model file: center row count mismatch");
    }
    r.expect("centers");
    m.centers.resize(m.feature_dim(), dim);
    r.fill(m.centers);
    if (m.mechanism == Mechanism::hypersphere) {
      r.expect("radii_sq");
      m.radii_sq.resize(m.feature_dim());
      r.fill(m.radii_sq);
    }
    r.expect("end");
    return m;
  }
  if (kind == "nystrom") {
    NystromModel m;
    r.expect("sigma");
    m.sigma = r.real();
    r.expect("seed");
    m.seed = r.integer<std::uint64_t>();
    r.expect("dim");
    const auto dim = r.integer<Index>();
    r.expect("landmarks");
    const auto count = r.integer<Index>();
    if (dim < 1 || count < 1 || !(m.sigma > 0)) throw DataError("model file: invalid Nystrom shape");
    m.landmark_rows = r.row_indices();
    r.expect("points");
    m.landmarks.resize(count, dim);
    r.fill(m.landmarks);
    r.expect("whitening");
    m.whitening.resize(count, count);
    r.fill(m.whitening);
    r.expect("end");
    return m;
  }
  throw DataError("model file: unknown kind '" + kind + "'");
}

}  // namespace mmc::kernels
