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

#include <functional>

#include "mmc/types.hpp"

namespace mmc {

// Environment variable that overrides the default worker count.
inline constexpr const char* kWorkersEnv = "MMC_WORKERS";

/// Number of workers used by parallel_for. Defaults to $MMC_WORKERS when
/// set, else the hardware concurrency.
int worker_count();
void set_worker_count(int workers);

/// Runs fn(begin, end) over a static partition of [0, n) into contiguous
/// chunks. Every index is visited exactly once; callers write only to
/// per-index outputs, so results do not depend on the schedule.
void parallel_for(Index n, const std::function<void(Index, Index)>& fn,
                  Index min_chunk = 1024);

}  // namespace mmc
