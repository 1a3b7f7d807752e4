// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace poshrink {

/// Worker cap used by parallel loops. 0 means "use the POSHRINK_THREADS
/// environment variable, or hardware concurrency when it is unset".
void set_thread_count(std::size_t threads);
std::size_t thread_count();

/// Runs body(i) for i in [0, n). Tasks are claimed dynamically; callers must
/// write results into per-task slots so the outcome does not depend on the
/// worker count. The first exception thrown by a task is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace poshrink
