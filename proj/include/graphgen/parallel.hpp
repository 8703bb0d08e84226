#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace graphgen {

inline int hardware_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// Resolves a user-facing thread count: <= 0 means "all hardware threads".
inline int resolve_threads(int threads) {
    return threads <= 0 ? hardware_threads() : threads;
}

/**
 * Runs fn(0..n-1) over a worker team. fn must be independent across indices
 * and deterministic given its index; results must be written to
 * preallocated slots so the output does not depend on scheduling.
 *
 * threads == 1 takes the plain serial loop, kept as the reference
 * implementation the parallel path is tested and benchmarked against. The
 * first exception thrown inside the team is captured and rethrown on the
 * calling thread.
 */
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    int team = resolve_threads(threads);
    if (team == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

#ifdef _OPENMP
    std::exception_ptr error;
    std::mutex error_mutex;
#pragma omp parallel for schedule(dynamic) num_threads(team)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
#else
    for (std::size_t i = 0; i < n; ++i) fn(i);
#endif
}

}  // namespace graphgen
