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

#include <iosfwd>
#include <variant>

#include "mmc/kernels.hpp"

// Text serialization of fitted kernel models.
//
//   mmc-model 1
//   kind ik | nystrom
//   <key> <value>            scalar fields (mechanism, t, psi, sigma, seed, dim)
//   rows <r>                 data-row indices the centers/landmarks came from
//   <r> lines of coordinates
//   radii_sq / whitening     hypersphere radii or the m x m whitening matrix
//   end
//
// Reals are written in shortest round-trip form, so load(save(m)) == m.
namespace mmc::kernels {

inline constexpr int kModelFormatVersion = 1;

using AnyModel = std::variant<IKModel, NystromModel>;

void save_model(std::ostream& out, const IKModel& model);
void save_model(std::ostream& out, const NystromModel& model);

/// Throws DataError on malformed input or an unsupported version.
AnyModel load_model(std::istream& in);

}  // namespace mmc::kernels
