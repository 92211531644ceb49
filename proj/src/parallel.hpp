#pragma once

#include <exception>

namespace netresp::detail {

// Runs body(i) for i in [0, count), on up to `workers` OpenMP threads. The
// first exception thrown by any task is rethrown on the calling thread.
template <class Body>
void parallel_for(int count, int workers, Body&& body) {
  if (workers <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
#pragma omp parallel for num_threads(workers) schedule(dynamic)
  for (int i = 0; i < count; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(netresp_parallel_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace netresp::detail
