#include "arratia/kernel.hpp"
#include "arratia/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace arratia {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

void require_positive_time(double r)
{
    if (!(r > 0.0))
        throw std::domain_error("kernel time must be positive");
}

double sq(double x) { return x * x; }

// Direct Gaussian factor and the image suppression exp(-(x2-x1)(y2-y1)/r),
// which equals exp(-(|x-y*|^2 - |x-y|^2) / 2r).
struct KernelParts {
    double direct;
    double image_ratio;
};

KernelParts parts(double r, Point x, Point y)
{
    const double d2 = sq(x.x1 - y.x1) + sq(x.x2 - y.x2);
    return {std::exp(-d2 / (2.0 * r)) / (2.0 * kPi * r), std::exp(-(x.x2 - x.x1) * (y.x2 - y.x1) / r)};
}

std::array<double, 2> grad_green_raw(double r, Point x, Point y)
{
    const KernelParts k = parts(r, x, y);
    const double image = k.direct * k.image_ratio;
    // y* = (y2, y1)
    return {(-(x.x1 - y.x1) * k.direct + (x.x1 - y.x2) * image) / r,
            (-(x.x2 - y.x2) * k.direct + (x.x2 - y.x1) * image) / r};
}

KernelBoundConstants calibrate()
{
    KernelBoundConstants c;
    c.gamma = 0.25;
    // Scale-free quantity at r = 1; invariant under shifts along the diagonal,
    // so x = (0, ux) rotated and y = (uy, vy) rotated cover the wedge.
    auto quantity = [&](double ux, double uy, double vy) {
        const Point x{-ux / kSqrt2, ux / kSqrt2};
        const Point y{(vy - uy) / kSqrt2, (vy + uy) / kSqrt2};
        const auto g = grad_green_raw(1.0, x, y);
        const double d2 = sq(x.x1 - y.x1) + sq(x.x2 - y.x2);
        return (std::abs(g[0]) + std::abs(g[1])) * std::exp(c.gamma * d2);
    };
    double best = 0.0, bx = 0.0, by = 0.0, bv = 0.0;
    const double h = 0.1;
    for (int i = 0; i <= 80; ++i)
        for (int j = 0; j <= 80; ++j)
            for (int k = -80; k <= 80; ++k) {
                const double q = quantity(i * h, j * h, k * h);
                if (q > best) {
                    best = q;
                    bx = i * h;
                    by = j * h;
                    bv = k * h;
                }
            }
    const double fine = 0.004;
    for (int i = -25; i <= 25; ++i)
        for (int j = -25; j <= 25; ++j)
            for (int k = -25; k <= 25; ++k) {
                const double ux = bx + i * fine, uy = by + j * fine;
                if (ux < 0.0 || uy < 0.0)
                    continue;
                best = std::max(best, quantity(ux, uy, bv + k * fine));
            }
    c.K = 1.05 * best;
    return c;
}

// with-final integral of order m at time s:
//   I_0(s) = s^{-1/2},  I_m(s) = int_0^s (s - r)^{-1/2} I_{m-1}(r) dr.
double nested_with_final(int m, double s)
{
    if (m == 0)
        return 1.0 / std::sqrt(s);
    const auto& rule = quad::gauss_legendre(16);
    const double half = 0.5 * s;
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double w = 0.5 * (rule.nodes[i] + 1.0); // w in (0, 1)
        const double wt = 0.5 * rule.weights[i];
        // r = (s/2) w^2 on the left half, dr = s w dw.
        const double rl = half * w * w;
        acc += wt * s * w * nested_with_final(m - 1, rl) / std::sqrt(s - rl);
        // s - r = (s/2) w^2 on the right half; (s - r)^{-1/2} dr = s w dw / sqrt(s/2) / w.
        const double rr = s - half * w * w;
        acc += wt * s / std::sqrt(half) * nested_with_final(m - 1, rr);
    }
    return acc;
}

} // namespace

WedgePoint::WedgePoint(double x1, double x2) : p_{x1, x2}
{
    if (!(x1 <= x2))
        throw std::domain_error("wedge point needs x1 <= x2");
}

double WedgePoint::normal_coordinate() const { return (p_.x2 - p_.x1) / kSqrt2; }
double WedgePoint::tangential_coordinate() const { return (p_.x1 + p_.x2) / kSqrt2; }

WedgePoint WedgePoint::from_rotated(double u, double v)
{
    return WedgePoint((v - u) / kSqrt2, (v + u) / kSqrt2);
}

const KernelBoundConstants& KernelBoundConstants::calibrated()
{
    static const KernelBoundConstants c = calibrate();
    return c;
}

double heat2d(double r, Point x, Point y)
{
    require_positive_time(r);
    const double d2 = sq(x.x1 - y.x1) + sq(x.x2 - y.x2);
    return std::exp(-d2 / (2.0 * r)) / (2.0 * kPi * r);
}

double green_killed(double r, WedgePoint x, WedgePoint y)
{
    require_positive_time(r);
    const double d2 = sq(x.x1() - y.x1()) + sq(x.x2() - y.x2());
    const double q = (x.x2() - x.x1()) * (y.x2() - y.x1()) / r;
    return std::exp(-d2 / (2.0 * r)) / (2.0 * kPi * r) * -std::expm1(-q);
}

std::array<double, 2> grad_green(double r, WedgePoint x, WedgePoint y)
{
    require_positive_time(r);
    return grad_green_raw(r, x, y);
}

double drift_grad_green(double r, WedgePoint x, WedgePoint y, const DriftSpec& d)
{
    const auto g = grad_green(r, x, y);
    return d(x.x1()) * g[0] + d(x.x2()) * g[1];
}

double grad_bound(double r, WedgePoint x, const DriftSpec& d, Point y, const KernelBoundConstants& c)
{
    require_positive_time(r);
    const double ga = std::min(std::abs(d(x.x1())) + std::abs(d(x.x2())), d.sup_norm());
    const double d2 = sq(x.x1() - y.x1) + sq(x.x2() - y.x2);
    return c.K * ga * std::pow(r, -1.5) * std::exp(-c.gamma * d2 / r);
}

double simplex_gamma_integral(int n, double s, bool with_final_factor)
{
    if (n < 1 || !(s > 0.0))
        throw std::domain_error("simplex integral needs n >= 1 and s > 0");
    if (with_final_factor)
        return std::pow(kPi, 0.5 * (n + 1)) * std::pow(s, 0.5 * (n - 1)) / std::tgamma(0.5 * (n + 1));
    return 2.0 * std::pow(kPi, 0.5 * n) * std::pow(s, 0.5 * n) / (n * std::tgamma(0.5 * n));
}

double simplex_gamma_quadrature(int n, double s, bool with_final_factor)
{
    if (n < 1 || !(s > 0.0))
        throw std::domain_error("simplex integral needs n >= 1 and s > 0");
    if (with_final_factor)
        return nested_with_final(n, s);
    // int_0^s I_{n-1}(r) dr with r = s w^2.
    const auto& rule = quad::gauss_legendre(16);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double w = 0.5 * (rule.nodes[i] + 1.0);
        acc += 0.5 * rule.weights[i] * 2.0 * s * w * nested_with_final(n - 1, s * w * w);
    }
    return acc;
}

double chapman_kolmogorov_quadrature(double r, double s, WedgePoint x, WedgePoint y)
{
    require_positive_time(r);
    require_positive_time(s);
    const double radius = 8.0 * std::sqrt(r + s);
    // Centre of the Gaussian bridge between x and y.
    const double ux = x.normal_coordinate(), vx = x.tangential_coordinate();
    const double uy = y.normal_coordinate(), vy = y.tangential_coordinate();
    const double uc = (s * ux + r * uy) / (r + s);
    const double vc = (s * vx + r * vy) / (r + s);
    const double w_lo = std::max(0.0, uc - radius), w_hi = uc + radius;
    const auto& rule = quad::gauss_legendre(128);
    return quad::integrate(
        rule,
        [&](double w) {
            return quad::integrate(
                rule,
                [&](double m) {
                    const WedgePoint z = WedgePoint::from_rotated(w, m);
                    return green_killed(r, x, z) * green_killed(s, z, y);
                },
                vc - radius, vc + radius);
        },
        w_lo, w_hi);
}

} // namespace arratia
