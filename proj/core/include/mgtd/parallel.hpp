#ifndef MGTD_PARALLEL_HPP
#define MGTD_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace mgtd {

// Worker-thread cap from MGTDETECT_THREADS (0 or unset = hardware count).
std::size_t worker_threads();

// Runs fn(i) for i in [0, n) over chunks on worker threads. fn must be
// pure per index (results written to index-addressed slots), so the output
// never depends on the schedule. Exceptions are rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace mgtd

#endif  // MGTD_PARALLEL_HPP
