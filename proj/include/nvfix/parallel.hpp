#pragma once

// Execution policy for the grid kernels. Every parallel kernel keeps a
// serial reference path; results are reduced in a fixed order so both
// paths return identical values.

namespace nvfix {

enum class Execution { serial, parallel };

// Cap on OpenMP threads used by parallel kernels; 0 means the runtime default.
void set_thread_limit(int threads);
int thread_limit();
// Threads a parallel kernel will use under the current limit.
int worker_count();

} // namespace nvfix
