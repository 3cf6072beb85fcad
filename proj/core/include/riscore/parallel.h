// Copyright 2026 The riscore Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef RISCORE_PARALLEL_H_
#define RISCORE_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace riscore {

// hardware_concurrency(), capped by the RISCORE_THREADS environment
// variable when it holds a positive integer. Always at least 1.
std::size_t WorkerCount();

// Runs fn(i) for i in [0, n) on up to WorkerCount() threads. fn must only
// write to per-index state. The first exception thrown is rethrown.
void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace riscore

#endif  // RISCORE_PARALLEL_H_
