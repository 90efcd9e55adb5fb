#pragma once

#include <functional>

namespace lspline::detail {

/// Number of worker threads for kernel-matrix assembly: hardware concurrency
/// capped by the LSPLINE_THREADS environment variable (>= 1).
int assembly_threads(int jobs);

/// Runs body(i) for i in [0, n) on a static contiguous partition. Every index
/// is processed exactly once, so results never depend on scheduling.
void parallel_for(int n, const std::function<void(int, int)>& chunk_body);

}  // namespace lspline::detail
