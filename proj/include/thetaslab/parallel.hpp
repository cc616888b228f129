// Copyright 2026 The thetaslab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace thetaslab {

// Hardware concurrency, capped by THETASLAB_THREADS when set (>= 1).
unsigned worker_count();

// Runs body(i) for i in [0, n) on up to worker_count() threads. Callers
// write results into per-index slots so output never depends on the schedule.
// The first exception thrown by any body is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace thetaslab
