#pragma once

#include <cstddef>

namespace mocheck {

/// Worker threads for parallel kernels: $MOCHECK_THREADS when set to a positive integer, otherwise
/// the OpenMP default.
int worker_count();

}  // namespace mocheck
