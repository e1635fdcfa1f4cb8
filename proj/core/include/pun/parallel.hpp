#pragma once

#include <cstddef>
#include <functional>

namespace pun {

/// Upper bound on worker threads used by parallel_for. 1 means serial.
void set_max_threads(unsigned count);
unsigned max_threads();

/// Runs body(i) for i in [0, n). Each index is executed exactly once; callers
/// write into per-index slots and reduce in index order afterwards, so results
/// do not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace pun
