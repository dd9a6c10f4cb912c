#pragma once

#include <cstddef>
#include <functional>

namespace bjacobi {

/// requested > 0 wins; otherwise BJACOBI_THREADS (0 or unset means auto);
/// auto is std::thread::hardware_concurrency().
int resolve_threads(int requested = 0);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index
/// runs exactly once; callers write results into per-index slots so the
/// outcome does not depend on scheduling. If bodies throw, the exception of
/// the lowest failing index is rethrown after all workers finish.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace bjacobi
