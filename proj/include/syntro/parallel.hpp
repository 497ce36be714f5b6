#pragma once

#include <cstddef>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace syntro {

/// Number of worker threads a kernel will use: `requested` when positive,
/// otherwise the OpenMP default (1 in a build without OpenMP).
int resolve_threads(int requested);

/// Runs fn(i) for i in [0, n). threads == 1 takes the plain serial loop,
/// which is kept as the reference path for tests and the benchmark; any
/// other value dispatches to OpenMP when available. fn must be safe to call
/// concurrently for distinct indices, and results must not depend on order.
template <class F>
void parallel_for(std::size_t n, int threads, F&& fn) {
    const int nt = resolve_threads(threads);
#if defined(_OPENMP)
    if (nt != 1) {
        const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic) num_threads(nt)
        for (long long i = 0; i < count; ++i) {
            fn(static_cast<std::size_t>(i));
        }
        return;
    }
#else
    (void)nt;
#endif
    for (std::size_t i = 0; i < n; ++i) {
        fn(i);
    }
}

}  // namespace syntro
