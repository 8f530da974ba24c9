// beatforge/parallel.h

// Copyright 2026  BeatForge Authors

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

#ifndef BEATFORGE_PARALLEL_H_
#define BEATFORGE_PARALLEL_H_

#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace beatforge {

// Runs fn(i) for i in [0, count) on up to `jobs` threads. Results must be
// written into index-addressed storage by the caller so that downstream
// reductions stay order-deterministic. The first exception is rethrown.
template <typename Fn>
void ParallelFor(long count, int jobs, Fn&& fn) {
  if (count <= 0) return;
  if (jobs < 1) jobs = 1;
  const int workers = static_cast<int>(std::min<long>(jobs, count));
  if (workers == 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }

  std::atomic<long> next(0);
  std::exception_ptr error;
  std::atomic<bool> failed(false);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (;;) {
        const long i = next.fetch_add(1);
        if (i >= count || failed.load()) return;
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (failed.load() && error) std::rethrow_exception(error);
}

inline int DefaultJobs() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

}  // namespace beatforge

#endif  // BEATFORGE_PARALLEL_H_
