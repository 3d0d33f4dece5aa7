#pragma once

#include <cstddef>
#include <functional>

namespace banachlab {

/// Worker count used by parallel_for; 0 selects hardware concurrency.
void set_worker_count(unsigned workers);
unsigned worker_count();

/// Runs body(i) for i in [0, n). Iterations must write only to their own
/// slots; callers reduce in index order, so results never depend on
/// scheduling. Nested calls execute serially on the calling worker.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace banachlab
