#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace mwpdiv {

/// 0 means auto (hardware concurrency, at least 1).
int resolve_threads(int requested);

/// Runs fn(index, worker) for every index in [0, count). Work is pulled
/// from a shared atomic counter; workers get stable ids in [0, threads) so
/// callers can keep per-worker scratch. Output must be written to
/// index-addressed slots, which keeps results independent of the schedule.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t index, int worker)>& fn);

}  // namespace mwpdiv
