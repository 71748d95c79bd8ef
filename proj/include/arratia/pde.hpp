#pragma once

#include "arratia/drift.hpp"
#include "arratia/estimate.hpp"
#include "arratia/parallel.hpp"

#include <string>
#include <vector>

namespace arratia::pde {

/// Grid in rotated coordinates u = (x2 - x1)/sqrt2 >= 0 (distance to the
/// killing diagonal) and v = (x1 + x2)/sqrt2.
struct RotatedGrid {
    double u_max = 8.0;
    double v_min = -8.0;
    double v_max = 8.0;
    double h_u = 0.02;
    double h_v = 0.02;
    double tau = 0.45 * 0.02 * 0.02;
    /// Geometric ramp of the first time steps (1 = uniform steps).
    double ramp = 1.0;

    int nu() const; ///< number of u intervals
    int nv() const; ///< number of v intervals
    double u(int i) const { return h_u * i; }
    double v(int j) const { return v_min + h_v * j; }

    /// Throws std::invalid_argument when the spacing or the stability
    /// constraint tau <= 0.45 min(h)^2 is violated.
    void validate() const;

    /// Smallest grid with spacing h covering the x window with the margins
    /// 6 sqrt(t) + 2 |a| t in u and on both sides in v; tau is the largest
    /// step allowed by both 0.45 h^2 and the positivity bound.
    static RotatedGrid for_problem(const DriftSpec& d, double t, Interval x_window, double h,
                                   double u_max = 0.0, double v_pad = 0.0);
};

/// Margin required beyond the evaluation window, 6 sqrt(t) + 2 |a| t.
double required_margin(const DriftSpec& d, double t);

/// Solution W(u, v, t), rows of constant v, u fastest.
struct WField {
    RotatedGrid grid;
    double t = 0.0;
    double s0 = 0.0;
    std::string drift;
    double sup_norm = 0.0;
    std::vector<double> values;
    double min_value = 0.0;
    double max_value = 1.0;
    long steps = 0;

    double at(int i, int j) const { return values[static_cast<std::size_t>(j) * (grid.nu() + 1) + i]; }
};

/// Explicit solve of dW/ds = 1/2 Lap W - (a(x1) d1 + a(x2) d2) W with W = 0 on
/// the diagonal, W = 1 at u = u_max, zero normal derivative at the v edges,
/// started from the driftless profile erf(u / sqrt(2 s0)) at
/// s0 = min(10 tau, 0.01 t). Rows are updated in parallel; the result does
/// not depend on the partitioning.
WField solve(const DriftSpec& d, double t, const RotatedGrid& grid,
             parallel::Exec exec = parallel::Exec::parallel);

/// Straightforward serial implementation of the same scheme, drift
/// coefficients tabulated per cell from the cell coordinates.
WField solve_reference(const DriftSpec& d, double t, const RotatedGrid& grid);

/// p(x) = (1/sqrt2) dW/du at u = 0, v = sqrt2 x, one-sided second-order
/// difference, linear interpolation between v rows.
DensityEstimate density_from_field(const WField& f, double x);

/// CSV with header u,v,W.
void write_field_csv(const WField& f, const std::string& path);

} // namespace arratia::pde
