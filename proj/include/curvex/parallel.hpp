#ifndef CURVEX_PARALLEL_HPP
#define CURVEX_PARALLEL_HPP

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace curvex {

/// Apply the CURVEX_THREADS worker cap, when set.
inline void configure_threads_from_env() {
#ifdef _OPENMP
    if (const char* v = std::getenv("CURVEX_THREADS")) {
        int n = std::atoi(v);
        if (n > 0) omp_set_num_threads(n);
    }
#endif
}

inline int worker_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace curvex

#endif
