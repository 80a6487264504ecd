#ifndef LATMIX_PARALLEL_HPP
#define LATMIX_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace latmix {

/// Worker count: LATMIX_THREADS if set and positive, else hardware concurrency.
int thread_count();

/// Runs f(0..n-1) on up to thread_count() workers. Tasks write results by
/// index, so output never depends on scheduling. The first exception thrown
/// by any task is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace latmix

#endif  // LATMIX_PARALLEL_HPP
