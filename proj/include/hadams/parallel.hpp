#pragma once

#include <cstddef>
#include <functional>

namespace hadams {

// Index-parallel map with deterministic gather: body(i) writes only into its
// own slot, so results are identical regardless of worker scheduling.
// threads <= 1 runs inline.
void parallel_for(size_t count, int threads,
                  const std::function<void(size_t)>& body);

}  // namespace hadams
