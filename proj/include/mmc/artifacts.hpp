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

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mmc::artifacts {

inline constexpr int kSchemaVersion = 1;

/// Writes `content` to a temporary file beside `path`, then renames it over
/// `path`, so readers never see a partial file. Throws DataError on I/O
/// failure.
void write_atomic(const std::filesystem::path& path, std::string_view content);

/// Ordered `key = value` text record. The first line is always
/// `schema_version = 1`; keys keep insertion order for diffable output.
class Record {
 public:
  explicit Record(std::string kind);

  Record& set(std::string key, std::string value);
  Record& set(std::string key, const char* value) { return set(std::move(key), std::string(value)); }
  Record& set(std::string key, double value);
  Record& set(std::string key, std::int64_t value);
  Record& set(std::string key, int value) { return set(std::move(key), static_cast<std::int64_t>(value)); }
  Record& set(std::string key, std::uint64_t value);
  Record& set(std::string key, bool value) { return set(std::move(key), std::string(value ? "true" : "false")); }

  const std::vector<std::pair<std::string, std::string>>& fields() const { return fields_; }
  /// Value of `key`, or empty when absent.
  std::string get(std::string_view key) const;
  std::string str() const;

  static Record parse(std::string_view text);

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

/// `index,label` rows, with 1-based cluster labels.
std::string labels_csv(std::span<const int> labels);

}  // namespace mmc::artifacts
