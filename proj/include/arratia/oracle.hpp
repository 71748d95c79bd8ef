#pragma once

namespace arratia::oracle {

/// 1-point density of the driftless flow, 1 / sqrt(pi t).
double density_zero(double t);

/// 1-point density for a(x) = c x (c != 0):
///   sqrt(2/pi) |c|^{1/2} / psi(t, c),
///   psi = (e^{2tc} - 1)^{1/2} for c > 0 and (1 - e^{2tc})^{1/2} for c < 0,
/// evaluated with expm1 so small |c| keeps full precision.
double density_linear(double c, double t);

} // namespace arratia::oracle
