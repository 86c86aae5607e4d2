#pragma once

#include <cstddef>
#include <functional>

namespace drokit {

/// Worker count for per-scenario fan-out. The DROKIT_THREADS environment
/// variable is an advisory override; values below 1 fall back to 1.
std::size_t effective_thread_count();

/// Run fn(i) for every i in [0, n). Fans out to effective_thread_count()
/// workers when n is large enough; callers keep all reductions on their own
/// side in fixed index order, so scheduling never changes results.
void parallel_for_index(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace drokit
