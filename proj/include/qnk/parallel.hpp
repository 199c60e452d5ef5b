/**
 * This code is part of the QNK workbench.
 *
 * (C) Copyright The QNK Workbench Authors 2026.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 *
 * Any modifications or derivative works of this code must retain this
 * copyright notice, and modified files need to carry a notice indicating
 * that they have been altered from the originals.
 */

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace qnk {

// Worker cap: QNK_THREADS if set to a positive integer, otherwise the
// hardware concurrency (at least 1).
inline std::size_t worker_count() {
  if (const char* env = std::getenv("QNK_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

// Splits [0, total) into `workers` contiguous chunks, evaluates
// `partial(begin, end)` for each (concurrently when workers > 1) and folds the
// partial results left to right in chunk order. With workers == 1 this is a
// plain serial evaluation of partial(0, total).
template <typename T, typename Partial>
T partitioned_sum(std::size_t total, std::size_t workers, Partial partial) {
  workers = std::max<std::size_t>(1, std::min(workers, std::max<std::size_t>(total, 1)));
  if (workers == 1) return partial(std::size_t{0}, total);

  std::vector<T> parts(workers);
  std::vector<std::thread> threads;
  const std::size_t chunk = total / workers;
  const std::size_t extra = total % workers;
  std::size_t begin = 0;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t end = begin + chunk + (w < extra ? 1 : 0);
    threads.emplace_back([&parts, &partial, w, begin, end] { parts[w] = partial(begin, end); });
    begin = end;
  }
  for (auto& t : threads) t.join();
  T sum = std::move(parts[0]);
  for (std::size_t w = 1; w < workers; ++w) sum += parts[w];
  return sum;
}

}  // namespace qnk
