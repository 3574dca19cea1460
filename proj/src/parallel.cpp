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

#include "mmc/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace mmc {

namespace {

int default_workers() {
  if (const char* env = std::getenv(kWorkersEnv)) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::atomic<int>& workers_setting() {
  static std::atomic<int> workers{default_workers()};
  return workers;
}

}  // namespace

int worker_count() { return workers_setting().load(); }

void set_worker_count(int workers) {
  workers_setting().store(std::max(1, workers));
}

void parallel_for(Index n, const std::function<void(Index, Index)>& fn,
                  Index min_chunk) {
  if (n <= 0) return;
  const Index max_workers = std::max<Index>(1, n / std::max<Index>(1, min_chunk));
  const Index workers = std::min<Index>(worker_count(), max_workers);
  if (workers <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  const Index chunk = (n + workers - 1) / workers;
  for (Index w = 0; w < workers; ++w) {
    const Index begin = w * chunk;
    const Index end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace mmc
