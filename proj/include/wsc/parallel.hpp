#pragma once

#include <cstddef>
#include <functional>

#include "wsc/common.hpp"

namespace wsc {

// Worker count used by all parallel loops. Resolution order:
// explicit set_thread_count() > WSCOUNT_THREADS env > hardware_concurrency.
unsigned thread_count();
void set_thread_count(unsigned n);  // 0 restores the default

// Runs fn(block) for block = 0..n_blocks-1 on the active worker pool.
// Blocks are a fixed decomposition of the work, so any per-block outputs
// combined in block order are independent of the number of workers.
void parallel_blocks(u64 n_blocks, const std::function<void(u64)>& fn);

}  // namespace wsc
