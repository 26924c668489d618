#pragma once

#include <cstddef>
#include <functional>

namespace pbc {

// Worker cap: PBCLAB_THREADS if set, else hardware concurrency.
unsigned worker_count();

// Runs body(i) for i in [0, n) across workers. Results must be written to
// per-index slots so the caller can reduce them in order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace pbc
