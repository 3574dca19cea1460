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

#include <stdexcept>
#include <string>

namespace mmc {

// Root of the library's exception hierarchy. The CLI maps each subclass to
// its own exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameters or inconsistent configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Unreadable or malformed input data.
class DataError : public Error {
 public:
  using Error::Error;
};

// The algorithm could not produce a result for the given inputs, e.g. the
// seeding stage found fewer than k components.
class AlgorithmError : public Error {
 public:
  using Error::Error;
};

}  // namespace mmc
