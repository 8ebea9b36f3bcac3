#pragma once

#include <cstddef>
#include <functional>

namespace kpz {

/// Worker count used by parallel loops; initialised from KPZ_THREADS.
int thread_count();
void set_thread_count(int n);

/// Runs body(i) for i in [0, n). Work is split by index, so results written to
/// per-index slots do not depend on the number of threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace kpz
