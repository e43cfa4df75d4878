#pragma once

#include <cstddef>
#include <functional>

namespace fvnsf {

/// Worker count for cell/face kernels, read once from FVNSF_NUM_THREADS
/// (default 1). Kernels only split elementwise work, so results do not depend
/// on the thread count.
int worker_threads();

/// Calls body(begin, end) over disjoint chunks covering [0, n).
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace fvnsf
