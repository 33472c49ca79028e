#pragma once
#include <cstddef>
#include <functional>

namespace bohm {

// Runs f(i) for i in [0, n) on up to `threads` workers with a static
// contiguous partition. Each index is independent, so the outcome does not
// depend on the thread count. The first exception thrown is rethrown.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& f);

}  // namespace bohm
