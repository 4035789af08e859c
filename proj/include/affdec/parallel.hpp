#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace affdec {

/// Worker count: RESTRICT_THREADS if set and positive, else hardware concurrency.
int thread_count();

/// Runs body(i) for i in [0, n) over contiguous chunks; body must only write its own slots.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Pairwise tree sum in a fixed order, independent of the thread schedule.
double pairwise_sum(const std::vector<double>& v);

}  // namespace affdec
