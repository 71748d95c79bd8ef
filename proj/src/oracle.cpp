#include "arratia/oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace arratia::oracle {

double density_zero(double t)
{
    if (!(t > 0.0))
        throw std::domain_error("density_zero: t must be positive");
    return 1.0 / std::sqrt(std::numbers::pi * t);
}

double density_linear(double c, double t)
{
    if (!(t > 0.0))
        throw std::domain_error("density_linear: t must be positive");
    if (c == 0.0)
        throw std::domain_error("density_linear: c = 0, use density_zero");
    const double psi_sq = c > 0.0 ? std::expm1(2.0 * t * c) : -std::expm1(2.0 * t * c);
    return std::sqrt(2.0 / std::numbers::pi) * std::sqrt(std::abs(c) / psi_sq);
}

} // namespace arratia::oracle
