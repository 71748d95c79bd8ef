#include "arratia/series.hpp"
#include "arratia/quadrature.hpp"
#include "arratia/rng.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace arratia::series {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

void require_bounded(const DriftSpec& d)
{
    if (!d.bounded())
        throw std::invalid_argument("unbounded drift unsupported by series");
}

void require_time(double t)
{
    if (!(t > 0.0))
        throw std::domain_error("series: time must be positive");
}

// Drift part of grad W0: (a(y2) - a(y1)) e^{-(y2-y1)^2 / 4r} / sqrt(pi r).
double drift_grad_W0(const DriftSpec& d, double y1, double y2, double r)
{
    const double gap = y2 - y1;
    return (d(y2) - d(y1)) * std::exp(-gap * gap / (4.0 * r)) / std::sqrt(kPi * r);
}

struct QuadOrders {
    int time = 32;
    int normal = 32;
    int tangential = 48;
};

// Time integral over (0, t) split in halves with r = (t/2) q^2 on the left
// and t - r = (t/2) q^2 on the right, which removes both endpoint
// singularities. f receives (r, t - r).
template <class F>
double time_integral(double t, int points, F&& f)
{
    const auto& rule = quad::gauss_legendre(points);
    const double half = 0.5 * t;
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double q = 0.5 * (rule.nodes[i] + 1.0);
        const double wq = 0.5 * rule.weights[i] * t * q; // dr = t q dq
        const double small = half * q * q;
        acc += wq * f(small, t - small);
        acc += wq * f(t - small, small);
    }
    return acc;
}

// -int_0^t dr int_{D2} dy d/dx2 g_{t-r}((x,x), y) grad^a W0(y, r), in rotated
// coordinates y = (w, m), w > 0.
double density_term1_quadrature(double x, double t, const DriftSpec& d, QuadOrders o)
{
    const auto& rw = quad::gauss_legendre(o.normal);
    const auto& rm = quad::gauss_legendre(o.tangential);
    const double vx = kSqrt2 * x;
    return -time_integral(t, o.time, [&](double r, double tau) {
        const double sigma = std::sqrt(r * tau / (r + tau));
        const double w_hi = 8.0 * sigma;
        const double m_half = 8.0 * std::sqrt(tau);
        const double pre = 1.0 / (2.0 * kPi * tau * tau * std::sqrt(kPi * r));
        return quad::integrate(
            rw,
            [&](double w) {
                const double radial = kSqrt2 * w * std::exp(-w * w / (2.0 * tau) - w * w / (2.0 * r));
                return radial * quad::integrate(
                                    rm,
                                    [&](double m) {
                                        const double dm = m - vx;
                                        const double y1 = (m - w) / kSqrt2, y2 = (m + w) / kSqrt2;
                                        return std::exp(-dm * dm / (2.0 * tau)) * (d(y2) - d(y1));
                                    },
                                    vx - m_half, vx + m_half);
            },
            0.0, w_hi) * pre;
    });
}

// -int_0^s dr int_{D2} dy g_{s-r}(x, y) grad^a W0(y, r).
double survival_term1_quadrature(WedgePoint x, double s, const DriftSpec& d, QuadOrders o)
{
    const auto& rw = quad::gauss_legendre(o.normal);
    const auto& rm = quad::gauss_legendre(o.tangential);
    const double ux = x.normal_coordinate(), vx = x.tangential_coordinate();
    return -time_integral(s, o.time, [&](double r, double tau) {
        const double var = r * tau / (r + tau);
        const double sigma = std::sqrt(var);
        const double m_half = 8.0 * std::sqrt(tau);
        const double pre = 1.0 / (2.0 * kPi * tau * std::sqrt(kPi * r));
        double total = 0.0;
        // Direct and image Gaussians in w, each restricted to w > 0.
        for (const double sign : {1.0, -1.0}) {
            const double mu = sign * ux * r / (r + tau);
            const double lo = std::max(0.0, mu - 8.0 * sigma);
            const double hi = mu + 8.0 * sigma;
            if (hi <= lo)
                continue;
            total += sign * quad::integrate(
                                rw,
                                [&](double w) {
                                    const double dw = w - sign * ux;
                                    const double radial = std::exp(-dw * dw / (2.0 * tau) - w * w / (2.0 * r));
                                    return radial * quad::integrate(
                                                        rm,
                                                        [&](double m) {
                                                            const double dm = m - vx;
                                                            const double y1 = (m - w) / kSqrt2;
                                                            const double y2 = (m + w) / kSqrt2;
                                                            return std::exp(-dm * dm / (2.0 * tau)) * (d(y2) - d(y1));
                                                        },
                                                        vx - m_half, vx + m_half);
                                },
                                lo, hi);
        }
        return pre * total;
    });
}

// Importance-sampled weight of one Monte Carlo draw.
//
// Times: gaps tau_1..tau_{n+1} of the simplex, Dirichlet(1/2, ..., 1/2) for
// the density term; Dirichlet(1/2, ..., 1/2, 1) for the survival term (its
// last factor g has no singularity). Space: y_n ~ N(start, tau_{n+1} I),
// y_{j-1} ~ N(y_j, tau_j I). The innermost y_0 integral is done exactly,
// leaving grad^a W0(y_1, r_1). Draws leaving the wedge get weight 0.
struct ChainSampler {
    int n;
    double horizon;
    Point start;
    bool density; // derivative term at the diagonal vs survival term
    const DriftSpec* drift;
    double time_mass; // integral of the time proposal's unnormalised density

    double weight(rng::Stream& rng, std::vector<double>& tau, std::vector<Point>& y) const
    {
        const int gaps = n + 1;
        double total = 0.0;
        for (int j = 0; j < gaps; ++j) {
            double g;
            if (!density && j == n) {
                g = -std::log(rng.uniform()); // Gamma(1)
            } else {
                const double z = rng.normal();
                g = 0.5 * z * z; // Gamma(1/2)
            }
            tau[j] = g;
            total += g;
        }
        for (int j = 0; j < gaps; ++j)
            tau[j] *= horizon / total;

        // tau[j] is the gap ending at r_{j+1}; tau[n] = horizon - r_n.
        Point prev = start;
        bool inside = true;
        for (int j = n; j >= 1; --j) {
            const double sd = std::sqrt(tau[j]);
            const double z1 = rng.normal();
            const double z2 = rng.normal();
            y[j] = {prev.x1 + sd * z1, prev.x2 + sd * z2};
            if (!(y[j].x1 < y[j].x2))
                inside = false;
            prev = y[j];
        }
        if (!inside)
            return 0.0;

        double w = time_mass;
        const int singular = density ? gaps : n;
        for (int j = 0; j < singular; ++j)
            w *= std::sqrt(tau[j]);

        const double last = tau[n];
        if (density)
            w *= (y[n].x2 - y[n].x1) / last;
        else
            w *= -std::expm1(-(start.x2 - start.x1) * (y[n].x2 - y[n].x1) / last);

        const DriftSpec& a = *drift;
        for (int j = n; j >= 2; --j) {
            const Point& cur = y[j];
            const Point& nxt = y[j - 1];
            const double tj = tau[j - 1];
            const double rho = std::exp(-(cur.x2 - cur.x1) * (nxt.x2 - nxt.x1) / tj);
            const double g1 = (-(cur.x1 - nxt.x1) + (cur.x1 - nxt.x2) * rho) / tj;
            const double g2 = (-(cur.x2 - nxt.x2) + (cur.x2 - nxt.x1) * rho) / tj;
            w *= a(cur.x1) * g1 + a(cur.x2) * g2;
        }
        w *= drift_grad_W0(a, y[1].x1, y[1].x2, tau[0]);
        return (n % 2 == 0) ? w : -w;
    }
};

SeriesTermEstimate run_chain(const ChainSampler& sampler, const Config& cfg, std::uint64_t stream)
{
    const std::uint64_t samples = cfg.samples;
    if (samples < 2)
        throw std::invalid_argument("series: need at least 2 Monte Carlo samples");
    const auto m = parallel::reduce<parallel::Moments>(
        samples,
        [&](std::size_t i) {
            thread_local std::vector<double> tau;
            thread_local std::vector<Point> y;
            tau.resize(static_cast<std::size_t>(sampler.n) + 1);
            y.resize(static_cast<std::size_t>(sampler.n) + 1);
            rng::Stream rng(cfg.seed, stream, i);
            return parallel::Moments::of(sampler.weight(rng, tau, y));
        },
        cfg.exec);
    SeriesTermEstimate est;
    est.n = sampler.n;
    est.value = m.mean();
    est.stderr_ = m.stderr_mean();
    return est;
}

std::uint64_t stream_id(bool density, int n)
{
    return (density ? 0x5e71e5d0ull : 0x5e71e5a0ull) + static_cast<std::uint64_t>(n);
}

double log_sum_tail(int N, auto&& log_term)
{
    // Terms eventually decay like 1/Gamma(n/2); sum until negligible.
    double sum = 0.0;
    for (int n = N + 1; n < N + 2000; ++n) {
        const double lt = log_term(n);
        const double term = std::exp(lt);
        sum += term;
        if (n > N + 5 && term < 1e-17 * sum)
            break;
    }
    return sum;
}

} // namespace

double W0(WedgePoint x, double s)
{
    require_time(s);
    return std::erf((x.x2() - x.x1()) / (2.0 * std::sqrt(s)));
}

std::array<double, 2> grad_W0(WedgePoint x, double s)
{
    require_time(s);
    const double gap = x.x2() - x.x1();
    const double g = std::exp(-gap * gap / (4.0 * s)) / std::sqrt(kPi * s);
    return {-g, g};
}

SeriesTermEstimate density_term_mc(int n, double x, double t, const DriftSpec& d, const Config& cfg)
{
    require_bounded(d);
    require_time(t);
    if (n < 1)
        throw std::invalid_argument("density_term_mc: n >= 1");
    const double gaps = n + 1;
    ChainSampler s{n, t, Point{x, x}, true, &d,
                   std::pow(kPi, 0.5 * gaps) * std::pow(t, 0.5 * (n - 1)) / std::tgamma(0.5 * gaps)};
    auto est = run_chain(s, cfg, stream_id(true, n));
    est.bound = truncation_bound(n, t, d.sup_norm());
    return est;
}

SeriesTermEstimate survival_term_mc(int n, WedgePoint x, double s, const DriftSpec& d, const Config& cfg)
{
    require_bounded(d);
    require_time(s);
    if (n < 1)
        throw std::invalid_argument("survival_term_mc: n >= 1");
    ChainSampler sampler{n, s, x.point(), false, &d,
                         std::pow(kPi, 0.5 * n) * std::pow(s, 0.5 * n) / std::tgamma(0.5 * n + 1.0)};
    // Stream keyed by the start point too, so different points are independent.
    const std::uint64_t pos = rng::mix64(std::bit_cast<std::uint64_t>(x.x1()) ^
                                         rng::mix64(std::bit_cast<std::uint64_t>(x.x2())));
    auto est = run_chain(sampler, cfg, stream_id(false, n) ^ pos);
    est.bound = survival_term_bound(n, s, d.sup_norm());
    return est;
}

SeriesTermEstimate density_term(int n, double x, double t, const DriftSpec& d, const Config& cfg)
{
    require_bounded(d);
    require_time(t);
    if (n < 0)
        throw std::invalid_argument("density_term: negative index");
    if (n > cfg.n_max)
        throw std::invalid_argument("density_term: n = " + std::to_string(n) + " exceeds n_max = " +
                                    std::to_string(cfg.n_max));
    SeriesTermEstimate est;
    est.n = n;
    if (n == 0) {
        est.value = 1.0 / std::sqrt(kPi * t);
        return est;
    }
    if (d.is_zero())
        return est;
    if (n == 1) {
        const double fine = density_term1_quadrature(x, t, d, {32, 32, 48});
        const double coarse = density_term1_quadrature(x, t, d, {24, 24, 32});
        est.value = fine;
        est.quadrature_error = std::abs(fine - coarse);
        est.bound = truncation_bound(1, t, d.sup_norm()) + est.quadrature_error;
        return est;
    }
    return density_term_mc(n, x, t, d, cfg);
}

SeriesTermEstimate survival_term(int n, WedgePoint x, double s, const DriftSpec& d, const Config& cfg)
{
    require_bounded(d);
    require_time(s);
    if (n < 0)
        throw std::invalid_argument("survival_term: negative index");
    if (n > cfg.n_max)
        throw std::invalid_argument("survival_term: n = " + std::to_string(n) + " exceeds n_max = " +
                                    std::to_string(cfg.n_max));
    SeriesTermEstimate est;
    est.n = n;
    if (n == 0) {
        est.value = W0(x, s);
        return est;
    }
    if (d.is_zero() || !x.interior())
        return est;
    if (n == 1) {
        const double fine = survival_term1_quadrature(x, s, d, {32, 32, 48});
        const double coarse = survival_term1_quadrature(x, s, d, {24, 24, 32});
        est.value = fine;
        est.quadrature_error = std::abs(fine - coarse);
        est.bound = survival_term_bound(1, s, d.sup_norm()) + est.quadrature_error;
        return est;
    }
    return survival_term_mc(n, x, s, d, cfg);
}

double truncation_bound(int n, double s, double sup_norm, const KernelBoundConstants& c)
{
    if (n < 1)
        throw std::invalid_argument("truncation_bound: n >= 1");
    if (sup_norm == 0.0)
        return 0.0;
    const double base = c.K * kPi / c.gamma;
    return std::pow(base, n + 1) * std::pow(sup_norm, n) * simplex_gamma_integral(n, s, true);
}

double survival_term_bound(int n, double s, double sup_norm, const KernelBoundConstants& c)
{
    if (n < 1)
        throw std::invalid_argument("survival_term_bound: n >= 1");
    if (sup_norm == 0.0)
        return 0.0;
    const double base = c.K * kPi / c.gamma;
    return std::pow(base * sup_norm, n) * simplex_gamma_integral(n, s, false);
}

double density_tail_bound(int N, double s, double sup_norm)
{
    if (sup_norm == 0.0)
        return 0.0;
    const auto& c = KernelBoundConstants::calibrated();
    const double lb = std::log(c.K * kPi / c.gamma);
    return log_sum_tail(N, [&](int n) {
        return (n + 1) * lb + n * std::log(sup_norm) + 0.5 * (n + 1) * std::log(kPi) +
               0.5 * (n - 1) * std::log(s) - std::lgamma(0.5 * (n + 1));
    });
}

double survival_tail_bound(int N, double s, double sup_norm)
{
    if (sup_norm == 0.0)
        return 0.0;
    const auto& c = KernelBoundConstants::calibrated();
    const double lb = std::log(c.K * kPi / c.gamma);
    return log_sum_tail(N, [&](int n) {
        return n * (lb + std::log(sup_norm)) + std::log(2.0) + 0.5 * n * std::log(kPi) + 0.5 * n * std::log(s) -
               std::log(static_cast<double>(n)) - std::lgamma(0.5 * n);
    });
}

DensityEstimate density_series(double x, double t, const DriftSpec& d, double tol, const Config& cfg)
{
    require_bounded(d);
    require_time(t);
    DensityEstimate est;
    est.method = Method::series;
    est.seed = cfg.seed;
    double var = 0.0;
    double quad_err = 0.0;
    int N = 0;
    for (;; ++N) {
        const auto term = density_term(N, x, t, d, cfg);
        est.value += term.value;
        var += term.stderr_ * term.stderr_;
        quad_err += term.quadrature_error;
        if (density_tail_bound(N, t, d.sup_norm()) < tol || N == cfg.n_max)
            break;
    }
    const double tail = density_tail_bound(N, t, d.sup_norm());
    est.stat_error = std::sqrt(var);
    est.det_bound = tail + quad_err;
    if (tail >= tol)
        est.flag = "tol_not_met";
    return est;
}

PartialSum W_partial(WedgePoint x, double s, const DriftSpec& d, int N, const Config& cfg)
{
    require_bounded(d);
    require_time(s);
    if (N < 0)
        throw std::invalid_argument("W_partial: N >= 0");
    PartialSum out;
    double var = 0.0;
    double quad_err = 0.0;
    for (int n = 0; n <= N; ++n) {
        auto term = survival_term(n, x, s, d, cfg);
        out.value += term.value;
        var += term.stderr_ * term.stderr_;
        quad_err += term.quadrature_error;
        out.terms.push_back(term);
    }
    out.stderr_ = std::sqrt(var);
    out.tail_bound = survival_tail_bound(N, s, d.sup_norm()) + quad_err;
    return out;
}

} // namespace arratia::series
