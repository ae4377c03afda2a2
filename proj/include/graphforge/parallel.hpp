#pragma once

namespace graphforge {

/// Caps the worker count used by the OpenMP kernels. Values < 1 restore the
/// runtime default.
void set_thread_count(int threads);
int thread_count();

/// Thread count from GRAPHFORGE_THREADS, or 0 when unset or unparsable.
int thread_count_from_env();

}  // namespace graphforge
