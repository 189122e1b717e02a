#pragma once

#include <cstddef>
#include <functional>

namespace fcp {

// Process-wide worker count used by every parallel loop; 1 means serial.
void set_workers(int n);
int workers();
int hardware_workers();

// Runs body(i) for i in [0, n). Each index must write only to its own output
// slot; callers reduce afterwards in index order, so results never depend on
// the worker count. The first exception thrown by any body is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace fcp
