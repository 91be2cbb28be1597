#pragma once

#include <cstddef>

#ifdef FAIRAUDIT_HAS_OPENMP
#include <omp.h>
#endif

namespace fairaudit {

// Execution policy for the batch kernels. Every kernel has a plain serial
// path that doubles as the reference implementation; the parallel path
// splits per-element work across OpenMP threads and keeps all final
// reductions serial, so both policies produce bit-identical results.
// Builds without OpenMP degrade Exec::parallel to the serial path.
enum class Exec { serial, parallel };

// Runs fn(i) for i in [0, n). The parallel path only requires fn to be
// thread-safe for distinct i (each i writing its own output slot).
template <typename Fn>
void for_each_index(std::size_t n, Exec exec, Fn&& fn) {
  if (exec == Exec::parallel) {
#ifdef FAIRAUDIT_HAS_OPENMP
#pragma omp parallel for schedule(dynamic, 16)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      fn(static_cast<std::size_t>(i));
    }
    return;
#endif
  }
  for (std::size_t i = 0; i < n; ++i) {
    fn(i);
  }
}

}  // namespace fairaudit
