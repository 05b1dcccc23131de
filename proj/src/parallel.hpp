#pragma once

#include <exception>
#include <vector>

#include <Eigen/Core>

namespace bwreg::detail {

// Runs body(i) for i in [0, count) on up to `threads` OpenMP threads. Each
// index writes only its own output slot, so results do not depend on the
// thread count. The exception from the lowest failing index is rethrown.
template <class Body>
void parallel_for(Eigen::Index count, int threads, Body&& body) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  const int nt = threads < 1 ? 1 : threads;
#pragma omp parallel for num_threads(nt) schedule(dynamic)
  for (Eigen::Index i = 0; i < count; ++i) {
    try {
      body(i);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace bwreg::detail
