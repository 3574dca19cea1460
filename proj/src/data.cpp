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

#include "mmc/data.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "mmc/error.hpp"
#include "mmc/rng.hpp"

namespace mmc::data {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  s = s.substr(first, last - first + 1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    s = s.substr(1, s.size() - 2);
  }
  return s;
}

std::vector<std::string_view> split_row(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::optional<double> parse_double(std::string_view cell) {
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double value = 0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) return std::nullopt;
  return value;
}

std::optional<int> parse_int(std::string_view cell) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) {
    return std::nullopt;
  }
  return value;
}

void append_double(std::string& out, double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

}  // namespace

void Dataset::validate() const {
  if (points.rows() < 1 || points.cols() < 1) {
    throw DataError("dataset '" + name + "' must have n >= 1 and d >= 1");
  }
  if (labels && static_cast<Index>(labels->size()) != points.rows()) {
    throw DataError("dataset '" + name + "' has " + std::to_string(labels->size()) +
                    " labels for " + std::to_string(points.rows()) + " points");
  }
}

Dataset read_csv(std::istream& in, const std::optional<std::string>& label_column,
                 std::string name) {
  std::string line;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    for (auto c : split_row(line)) cells.emplace_back(c);
    rows.push_back(std::move(cells));
    line_numbers.push_back(line_no);
  }
  if (rows.empty()) throw DataError(name + ": no data rows");

  const std::size_t arity = rows.front().size();
  std::vector<std::string> header;
  std::size_t first_data = 0;
  if (std::any_of(rows.front().begin(), rows.front().end(),
                  [](const std::string& c) { return !parse_double(c); })) {
    header = rows.front();
    first_data = 1;
  }

  std::optional<std::size_t> label_idx;
  if (label_column) {
    if (!header.empty()) {
      const auto it = std::find(header.begin(), header.end(), *label_column);
      if (it == header.end()) {
        throw DataError(name + ": label column '" + *label_column + "' not found");
      }
      label_idx = static_cast<std::size_t>(it - header.begin());
    } else {
      const auto idx = parse_int(*label_column);
      if (!idx || *idx < 0 || static_cast<std::size_t>(*idx) >= arity) {
        throw DataError(name + ": label column '" + *label_column +
                        "' not found (file has no header)");
      }
      label_idx = static_cast<std::size_t>(*idx);
    }
  }

  const std::size_t n = rows.size() - first_data;
  if (n == 0) throw DataError(name + ": header but no data rows");
  const std::size_t d = arity - (label_idx ? 1 : 0);
  if (d == 0) throw DataError(name + ": no feature columns");

  Dataset out;
  out.name = std::move(name);
  out.points.resize(static_cast<Index>(n), static_cast<Index>(d));
  std::vector<std::string> raw_labels;
  for (std::size_t r = first_data; r < rows.size(); ++r) {
    const auto& cells = rows[r];
    if (cells.size() != arity) {
      throw DataError(out.name + ": ragged row at line " + std::to_string(line_numbers[r]) +
                      " (" + std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(arity) + ")");
    }
    Index col = 0;
    for (std::size_t c = 0; c < arity; ++c) {
      if (label_idx && c == *label_idx) {
        raw_labels.push_back(cells[c]);
        continue;
      }
      const auto v = parse_double(cells[c]);
      if (!v) {
        throw DataError(out.name + ": non-numeric value '" + cells[c] + "' at line " +
                        std::to_string(line_numbers[r]) + ", column " +
                        std::to_string(c + 1));
      }
      out.points(static_cast<Index>(r - first_data), col++) = *v;
    }
  }

  if (label_idx) {
    std::vector<int> labels;
    labels.reserve(raw_labels.size());
    const bool all_int = std::all_of(raw_labels.begin(), raw_labels.end(),
                                     [](const std::string& s) { return parse_int(s).has_value(); });
    if (all_int) {
      for (const auto& s : raw_labels) labels.push_back(*parse_int(s));
    } else {
      std::map<std::string, int> ids;
      for (const auto& s : raw_labels) {
        const auto [it, inserted] = ids.emplace(s, static_cast<int>(ids.size()));
        labels.push_back(it->second);
      }
    }
    out.labels = std::move(labels);
  }
  return out;
}

Dataset load_csv(const std::string& path, const std::optional<std::string>& label_column) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return read_csv(in, label_column, path);
}

void write_csv(std::ostream& out, const Dataset& data) {
  std::string buf;
  for (Index j = 0; j < data.dim(); ++j) {
    if (j) buf += ',';
    buf += 'x';
    buf += std::to_string(j);
  }
  if (data.labels) buf += ",label";
  buf += '\n';
  for (Index i = 0; i < data.size(); ++i) {
    for (Index j = 0; j < data.dim(); ++j) {
      if (j) buf += ',';
      append_double(buf, data.points(i, j));
    }
    if (data.labels) {
      buf += ',';
      buf += std::to_string((*data.labels)[static_cast<std::size_t>(i)]);
    }
    buf += '\n';
    if (buf.size() > (1 << 20)) {
      out << buf;
      buf.clear();
    }
  }
  out << buf;
}

Dataset normalize_minmax(Dataset data) {
  for (Index j = 0; j < data.dim(); ++j) {
    auto col = data.points.col(j);
    if (col.size() == 0) continue;
    const double lo = col.minCoeff();
    const double hi = col.maxCoeff();
    if (!(hi > lo)) {
      col.setZero();
      continue;
    }
    const double inv = 1.0 / (hi - lo);
    for (Index i = 0; i < col.size(); ++i) {
      // Clamp guards against 1 + ulp from the rounded reciprocal.
      col(i) = std::clamp((col(i) - lo) * inv, 0.0, 1.0);
    }
  }
  return data;
}

SampleSet subsample(Index n, Index s, std::uint64_t seed) {
  if (s < 1 || s > n) {
    throw ConfigError("sample size s=" + std::to_string(s) + " must be in [1, n=" +
                      std::to_string(n) + "]");
  }
  CounterRng rng(seed);
  return SampleSet{sample_without_replacement(n, s, rng), seed};
}

std::uint64_t dataset_hash(const Dataset& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const void* p, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  };
  const std::int64_t shape[2] = {data.size(), data.dim()};
  mix(shape, sizeof(shape));
  for (Index i = 0; i < data.size(); ++i) {
    for (Index j = 0; j < data.dim(); ++j) {
      const double v = data.points(i, j);
      mix(&v, sizeof(v));
    }
  }
  if (data.labels) mix(data.labels->data(), data.labels->size() * sizeof(int));
  return h;
}

}  // namespace mmc::data
