#pragma once

#include "arratia/drift.hpp"
#include "arratia/estimate.hpp"
#include "arratia/kernel.hpp"
#include "arratia/parallel.hpp"

#include <cstdint>

namespace arratia::mc {

struct PathConfig {
    std::uint64_t n_paths = 100'000;
    double dt = 1e-3;
    bool bridge_correction = true;
    std::uint64_t seed = 20240501;
    parallel::Exec exec = parallel::Exec::parallel;

    /// Throws std::invalid_argument unless n_paths >= 1000 and dt <= t/20.
    void validate(double t) const;
};

/// P(theta_x > t) for the pair d xi_k = -a(xi_k) ds + d w_k, killed when
/// xi_2 - xi_1 hits 0. Euler-Maruyama; with the bridge correction every
/// surviving step multiplies the path weight by 1 - exp(-z_k z_{k+1} / dt),
/// z the gap. Path i draws from the stream (seed, i).
SurvivalEstimate survival(WedgePoint x, double t, const DriftSpec& d, const PathConfig& cfg);

/// Serial, unchunked version of survival (plain running sums).
SurvivalEstimate survival_reference(WedgePoint x, double t, const DriftSpec& d, const PathConfig& cfg);

/// survival((u, u + delta), t) / delta. With richardson the estimate is
/// 2 p(delta/2) - p(delta) and det_bound = |p(delta) - p(delta/2)|; both
/// quotients share the seed. flag "delta_large" when delta > 0.1 sqrt t.
DensityEstimate density_mc(double u, double t, double delta, const DriftSpec& d, const PathConfig& cfg,
                           bool richardson = false);

/// Default delta = 0.02 sqrt t.
double default_delta(double t);

} // namespace arratia::mc
