#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace oneshot {

/// Selects between the OpenMP kernel and its serial reference.
enum class Execution { serial, parallel };

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

/// Runs body(i) for i in [0, n). Every index owns its output slot, so the
/// result never depends on the schedule. The first exception thrown by any
/// index is rethrown on the calling thread.
template <typename Body>
void for_each_index(Execution exec, std::int64_t n, Body&& body) {
  if (exec == Execution::serial) {
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr first;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(oneshot_for_each_index)
      if (!first) first = std::current_exception();
    }
  }
  if (first) std::rethrow_exception(first);
}

}  // namespace oneshot
