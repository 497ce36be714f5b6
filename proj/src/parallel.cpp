#include "syntro/parallel.hpp"

namespace syntro {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
#if defined(_OPENMP)
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace syntro
