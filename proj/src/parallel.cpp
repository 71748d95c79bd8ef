#include "arratia/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <omp.h>

namespace arratia::parallel {

void set_threads(int n)
{
    omp_set_num_threads(std::max(1, n));
}

int threads()
{
    return omp_get_max_threads();
}

double Moments::stderr_mean() const
{
    if (count < 2)
        return 0.0;
    const double m = sum / count;
    const double var = std::max(0.0, (sum_sq - count * m * m) / (count - 1.0));
    return std::sqrt(var / count);
}

} // namespace arratia::parallel
