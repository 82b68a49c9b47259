#pragma once

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace iaware {

/// Execution policy for the data-parallel kernels. The serial path runs the
/// same per-item kernels in a plain loop and is kept as the reference the
/// tests compare against; results are identical bit-for-bit because every
/// item owns an independent random stream and writes only its own slot.
struct ExecPolicy {
    bool parallel = true;
    int threads = 0;  // 0 = OpenMP default

    static ExecPolicy serial() { return ExecPolicy{false, 0}; }
};

template <typename Body>
void for_index(std::int64_t n, const ExecPolicy& exec, Body&& body) {
#ifdef _OPENMP
    if (exec.parallel && n > 1) {
        if (exec.threads > 0) {
#pragma omp parallel for schedule(static) num_threads(exec.threads)
            for (std::int64_t i = 0; i < n; ++i) {
                body(i);
            }
        } else {
#pragma omp parallel for schedule(static)
            for (std::int64_t i = 0; i < n; ++i) {
                body(i);
            }
        }
        return;
    }
#endif
    for (std::int64_t i = 0; i < n; ++i) {
        body(i);
    }
}

}  // namespace iaware
