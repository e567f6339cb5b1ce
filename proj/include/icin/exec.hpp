#pragma once
// Serial/parallel execution switch for the data-parallel kernels (posterior
// push-forward, sensitivity grids, quadrature rows). Loop bodies write to
// disjoint slots and reductions stay serial, so both paths give bit-identical
// results; the serial path is the reference the tests compare against.

#include <cstddef>

namespace icin {

enum class Exec { serial, parallel };

template <class Body>
void parallel_for(std::size_t n, Exec exec, Body&& body) {
#ifdef _OPENMP
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      body(static_cast<std::size_t>(i));
    return;
  }
#else
  (void)exec;
#endif
  for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace icin
