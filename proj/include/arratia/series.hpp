#pragma once

#include "arratia/drift.hpp"
#include "arratia/estimate.hpp"
#include "arratia/kernel.hpp"
#include "arratia/parallel.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace arratia::series {

struct Config {
    int n_max = 4;
    /// Monte Carlo samples per term of order >= 2.
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 20240501;
    parallel::Exec exec = parallel::Exec::parallel;
};

/// One term of the Duhamel expansion.
struct SeriesTermEstimate {
    int n = 0;
    double value = 0.0;
    double stderr_ = 0.0;
    /// A-priori bound on |term| plus the quadrature error estimate (n = 1).
    double bound = 0.0;
    double quadrature_error = 0.0;
};

/// Driftless survival P(theta^0_x > s) = erf((x2 - x1) / (2 sqrt s)).
double W0(WedgePoint x, double s);
/// (d/dx1, d/dx2) W0; d/dx2 = e^{-(x2-x1)^2 / 4s} / sqrt(pi s) = -d/dx1.
std::array<double, 2> grad_W0(WedgePoint x, double s);

/// d/dx2 W_n((x, x), t). n = 0 analytic, n = 1 tensor Gauss-Legendre,
/// n >= 2 importance-sampled Monte Carlo.
SeriesTermEstimate density_term(int n, double x, double t, const DriftSpec& d, const Config& cfg = {});

/// W_n(x, s), same evaluation strategy as density_term.
SeriesTermEstimate survival_term(int n, WedgePoint x, double s, const DriftSpec& d, const Config& cfg = {});

/// Constructive bound on |d/dx_k W_n(x, s)|:
///   (K pi / gamma)^{n+1} |a|^n * simplex_gamma_integral(n, s, true).
double truncation_bound(int n, double s, double sup_norm,
                        const KernelBoundConstants& c = KernelBoundConstants::calibrated());

/// Constructive bound on |W_n(x, s)|:
///   (K pi / gamma)^n |a|^n * simplex_gamma_integral(n, s, false).
double survival_term_bound(int n, double s, double sup_norm,
                           const KernelBoundConstants& c = KernelBoundConstants::calibrated());

/// sum_{n > N} of the respective bound (0 when sup_norm = 0).
double density_tail_bound(int N, double s, double sup_norm);
double survival_tail_bound(int N, double s, double sup_norm);

/// p_t(x) = sum_n d/dx2 W_n((x, x), t), truncated once the bound tail
/// drops below tol or at n_max. flag = "tol_not_met" when the tail is
/// still above tol.
DensityEstimate density_series(double x, double t, const DriftSpec& d, double tol, const Config& cfg = {});

struct PartialSum {
    double value = 0.0;
    double stderr_ = 0.0;
    /// Bound on the neglected terms plus quadrature error.
    double tail_bound = 0.0;
    std::vector<SeriesTermEstimate> terms;
};

/// sum_{n <= N} W_n(x, s).
PartialSum W_partial(WedgePoint x, double s, const DriftSpec& d, int N, const Config& cfg = {});

/// Monte Carlo estimate of a term of either kind with an explicit sample
/// budget; exposed so the quadrature of order 1 can be cross-checked.
SeriesTermEstimate density_term_mc(int n, double x, double t, const DriftSpec& d, const Config& cfg);
SeriesTermEstimate survival_term_mc(int n, WedgePoint x, double s, const DriftSpec& d, const Config& cfg);

} // namespace arratia::series
