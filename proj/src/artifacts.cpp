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

#include "mmc/artifacts.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "mmc/error.hpp"

#include <unistd.h>

namespace mmc::artifacts {

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw DataError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw DataError("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw DataError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

Record::Record(std::string kind) {
  fields_.emplace_back("schema_version", std::to_string(kSchemaVersion));
  fields_.emplace_back("kind", std::move(kind));
}

Record& Record::set(std::string key, std::string value) {
  if (key.empty() || key.find_first_of(" =\n") != std::string::npos) {
    throw ConfigError("invalid record key '" + key + "'");
  }
  if (value.find('\n') != std::string::npos) throw ConfigError("record value for '" + key + "' has a newline");
  for (auto& f : fields_) {
    if (f.first == key) {
      f.second = std::move(value);
      return *this;
    }
  }
  fields_.emplace_back(std::move(key), std::move(value));
  return *this;
}

Record& Record::set(std::string key, double value) { return set(std::move(key), format_double(value)); }
Record& Record::set(std::string key, std::int64_t value) { return set(std::move(key), std::to_string(value)); }
Record& Record::set(std::string key, std::uint64_t value) { return set(std::move(key), std::to_string(value)); }

std::string Record::get(std::string_view key) const {
  for (const auto& f : fields_) {
    if (f.first == key) return f.second;
  }
  return {};
}

std::string Record::str() const {
  std::string out;
  for (const auto& [k, v] : fields_) out += k + " = " + v + "\n";
  return out;
}

Record Record::parse(std::string_view text) {
  Record rec("");
  rec.fields_.clear();
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) throw DataError("record line " + std::to_string(lineno) + " is not 'key = value'");
    rec.fields_.emplace_back(line.substr(0, eq), line.substr(eq + 3));
  }
  if (rec.get("schema_version") != std::to_string(kSchemaVersion)) {
    throw DataError("unsupported record schema version '" + rec.get("schema_version") + "'");
  }
  return rec;
}

std::string labels_csv(std::span<const int> labels) {
  std::string out = "index,label\n";
  out.reserve(out.size() + labels.size() * 8);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += std::to_string(labels[i] + 1);
    out += '\n';
  }
  return out;
}

}  // namespace mmc::artifacts
