#pragma once

#include <cstddef>
#include <functional>

namespace stochord {

/// Worker count: hardware concurrency, capped by STOCHORD_THREADS when set.
unsigned thread_cap();

/// Runs body(i) for i in [0, n). Each index writes only its own result slot, so the
/// outcome does not depend on scheduling. The first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace stochord
