#pragma once

#include <cstddef>
#include <functional>

namespace rgqm {

// Thread cap: RGQM_THREADS if set, else hardware concurrency. set_max_threads overrides.
int max_threads();
void set_max_threads(int n);

// Runs body(i) for i in [0, n). Each index writes its own slot, so results do not
// depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace rgqm
