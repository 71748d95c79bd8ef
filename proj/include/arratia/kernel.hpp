#pragma once

#include "arratia/drift.hpp"

#include <array>

namespace arratia {

/// A point of the plane.
struct Point {
    double x1 = 0.0;
    double x2 = 0.0;
};

/// A point of the closed wedge {x1 <= x2}.
class WedgePoint {
public:
    WedgePoint(double x1, double x2);

    double x1() const { return p_.x1; }
    double x2() const { return p_.x2; }
    bool interior() const { return p_.x1 < p_.x2; }
    Point point() const { return p_; }
    operator Point() const { return p_; }

    /// Distance to the diagonal, (x2 - x1) / sqrt(2).
    double normal_coordinate() const;
    /// Position along the diagonal, (x1 + x2) / sqrt(2).
    double tangential_coordinate() const;
    static WedgePoint from_rotated(double u, double v);

private:
    Point p_;
};

/// Constants of the Gaussian domination bound for the killed kernel's
/// gradient: sum_k |d_k g_r(x, y)| <= K r^{-3/2} exp(-gamma |x - y|^2 / r).
struct KernelBoundConstants {
    double K = 0.0;
    double gamma = 0.25;

    /// gamma = 1/4; K = 1.05 * (sup of the scale-free quantity over a dense
    /// sample of the wedge, refined around the maximiser). Computed once.
    static const KernelBoundConstants& calibrated();
};

/// Free planar heat kernel with unit diffusion per axis.
double heat2d(double r, Point x, Point y);

/// Transition density of planar Brownian motion killed on the diagonal,
/// by the image method with y* = (y2, y1).
double green_killed(double r, WedgePoint x, WedgePoint y);

/// (d/dx1, d/dx2) of green_killed(r, x, y).
std::array<double, 2> grad_green(double r, WedgePoint x, WedgePoint y);

/// a(x1) d/dx1 g + a(x2) d/dx2 g.
double drift_grad_green(double r, WedgePoint x, WedgePoint y, const DriftSpec& d);

/// K G_a(x) r^{-3/2} exp(-gamma |x - y|^2 / r) with
/// G_a(x) = min(|a(x1)| + |a(x2)|, sup |a|).
double grad_bound(double r, WedgePoint x, const DriftSpec& d, Point y, const KernelBoundConstants& c);

/// Closed forms of the simplex integrals
///   with final factor:    int_{Delta_n(s)} (s - r_n)^{-1/2} prod (r_j - r_{j-1})^{-1/2}
///                         = pi^{(n+1)/2} s^{(n-1)/2} / Gamma((n+1)/2)
///   without final factor: int_{Delta_n(s)} prod (r_j - r_{j-1})^{-1/2}
///                         = 2 pi^{n/2} s^{n/2} / (n Gamma(n/2))
double simplex_gamma_integral(int n, double s, bool with_final_factor);

/// The same integrals by nested one-dimensional Gauss-Legendre quadrature,
/// with r = s w^2 substitutions removing the endpoint singularities.
double simplex_gamma_quadrature(int n, double s, bool with_final_factor);

/// int_{D2} g_r(x, z) g_s(z, y) dz by tensor quadrature in rotated
/// coordinates, truncated at radius 8 sqrt(r + s).
double chapman_kolmogorov_quadrature(double r, double s, WedgePoint x, WedgePoint y);

} // namespace arratia
