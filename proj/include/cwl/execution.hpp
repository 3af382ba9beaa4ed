#pragma once

#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>

namespace cwl {

// Every data-parallel kernel exists in two forms: a plain serial loop kept as
// the reference, and an OpenMP loop. Both must produce bit-identical results,
// which holds because each loop body writes a distinct output slot and all
// reductions happen afterwards in index order.
enum class Exec { serial, parallel };

// Runs body(i) for i in [0, n). An exception thrown by any iteration is
// rethrown after the loop; under Exec::parallel the one with the lowest index
// wins so the reported failure does not depend on scheduling.
template <class Body>
void for_each_index(Exec exec, std::size_t n, Body&& body) {
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr first;
  std::size_t first_index = std::numeric_limits<std::size_t>::max();
  std::mutex guard;
  const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 4)
  for (long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (static_cast<std::size_t>(i) < first_index) {
        first_index = static_cast<std::size_t>(i);
        first = std::current_exception();
      }
    }
  }
  if (first) std::rethrow_exception(first);
}

// Number of OpenMP threads in use (1 when built without OpenMP).
int thread_count();
void set_thread_count(int n);

}  // namespace cwl
