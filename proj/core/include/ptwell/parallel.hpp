#pragma once

#include <functional>

namespace ptwell {

// Number of worker threads: hardware concurrency capped by the PTWELL_THREADS
// environment variable (<=1 disables threading).
int thread_budget();

// Index-parallel loop with deterministic result placement: fn(i) must write
// only to slot i of pre-sized storage.  Runs serially when the budget or n is
// small.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace ptwell
