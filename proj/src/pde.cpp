#include "arratia/pde.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace arratia::pde {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

bool is_multiple(double length, double h)
{
    const double q = length / h;
    return std::abs(q - std::round(q)) < 1e-7 * std::max(1.0, q);
}

struct Schedule {
    double s0 = 0.0;
    std::vector<double> steps;
};

Schedule make_schedule(const RotatedGrid& g, double t)
{
    Schedule s;
    s.s0 = std::min(10.0 * g.tau, 0.01 * t);
    double remaining = t - s.s0;
    if (g.ramp > 1.0) {
        constexpr int kRampSteps = 8;
        double used = 0.0;
        std::vector<double> ramp;
        for (int k = kRampSteps; k >= 1; --k) {
            ramp.push_back(g.tau * std::pow(g.ramp, -k));
            used += ramp.back();
        }
        if (used < remaining) {
            s.steps = std::move(ramp);
            remaining -= used;
        }
    }
    const long n = std::max(1L, static_cast<long>(std::ceil(remaining / g.tau - 1e-9)));
    const double dt = remaining / static_cast<double>(n);
    s.steps.insert(s.steps.end(), static_cast<std::size_t>(n), dt);
    return s;
}

void check_inputs(const DriftSpec& d, double t, const RotatedGrid& g)
{
    if (!d.bounded())
        throw std::invalid_argument("unbounded drift unsupported by pde");
    if (!(t > 0.0))
        throw std::domain_error("pde: t must be positive");
    g.validate();
    const double margin = required_margin(d, t);
    if (g.u_max + 1e-12 < margin)
        throw std::invalid_argument("pde: u_max = " + format_real(g.u_max) + " below required margin " +
                                    format_real(margin));
    const double b = kSqrt2 * d.sup_norm();
    const double rate = 1.0 / (g.h_u * g.h_u) + 1.0 / (g.h_v * g.h_v) + b / g.h_u + b / g.h_v;
    if (g.tau * rate > 1.0)
        throw std::invalid_argument("pde: time step violates the positivity (stability) bound");
}

WField initial_field(const DriftSpec& d, double t, const RotatedGrid& g, double s0)
{
    WField f;
    f.grid = g;
    f.t = t;
    f.s0 = s0;
    f.drift = d.describe();
    f.sup_norm = d.sup_norm();
    const int nu = g.nu(), nv = g.nv();
    f.values.resize(static_cast<std::size_t>(nu + 1) * (nv + 1));
    const double scale = 1.0 / std::sqrt(2.0 * s0);
    for (int j = 0; j <= nv; ++j) {
        double* row = f.values.data() + static_cast<std::size_t>(j) * (nu + 1);
        row[0] = 0.0;
        for (int i = 1; i < nu; ++i)
            row[i] = std::erf(g.u(i) * scale);
        row[nu] = 1.0;
    }
    return f;
}

struct Extremes {
    double lo = 0.0;
    double hi = 1.0;
};

// One row of the explicit upwind update. With Lattice the rotated drift is
// formed from a(x1) = p[i], a(x2) = q[i]; otherwise p, q hold b_u, b_v.
template <bool Lattice>
inline Extremes update_row(const double* __restrict south, const double* __restrict row,
                           const double* __restrict north, double* __restrict out, const double* __restrict p,
                           const double* __restrict q, int nu, double dt, const RotatedGrid& g)
{
    const double ku = 0.5 / (g.h_u * g.h_u);
    const double kv = 0.5 / (g.h_v * g.h_v);
    const double iu = 1.0 / g.h_u;
    const double iv = 1.0 / g.h_v;
    constexpr double r = 1.0 / kSqrt2;
    double lo = 0.0, hi = 1.0;
    out[0] = 0.0;
#pragma omp simd reduction(min : lo) reduction(max : hi)
    for (int i = 1; i < nu; ++i) {
        const double c = row[i];
        const double e = row[i + 1];
        const double w = row[i - 1];
        const double n = north[i];
        const double s = south[i];
        const double b_u = Lattice ? (q[i] - p[i]) * r : p[i];
        const double b_v = Lattice ? (p[i] + q[i]) * r : q[i];
        const double up = b_u > 0.0 ? b_u : 0.0, um = b_u < 0.0 ? b_u : 0.0;
        const double vp = b_v > 0.0 ? b_v : 0.0, vm = b_v < 0.0 ? b_v : 0.0;
        const double lap = (e + w - 2.0 * c) * ku + (n + s - 2.0 * c) * kv;
        const double adv = (up * (c - w) + um * (e - c)) * iu + (vp * (c - s) + vm * (n - c)) * iv;
        const double next = c + dt * (lap - adv);
        out[i] = next;
        lo = std::min(lo, next);
        hi = std::max(hi, next);
    }
    out[nu] = 1.0;
    return {lo, hi};
}

void check_extremes(const Extremes& e, WField& f)
{
    f.min_value = std::min(f.min_value, e.lo);
    f.max_value = std::max(f.max_value, e.hi);
    if (e.lo < -1e-12 || e.hi > 1.0 + 1e-9)
        throw std::runtime_error("pde: maximum principle violated (min " + format_real(e.lo) + ", max " +
                                 format_real(e.hi) + ")");
}

} // namespace

int RotatedGrid::nu() const { return static_cast<int>(std::lround(u_max / h_u)); }
int RotatedGrid::nv() const { return static_cast<int>(std::lround((v_max - v_min) / h_v)); }

void RotatedGrid::validate() const
{
    if (!(h_u > 0.0 && h_v > 0.0 && tau > 0.0 && u_max > 0.0 && v_max > v_min))
        throw std::invalid_argument("grid: steps and extents must be positive");
    if (!is_multiple(u_max, h_u) || !is_multiple(v_max - v_min, h_v))
        throw std::invalid_argument("grid: extents must be integer multiples of the steps");
    if (nu() < 8 || nv() < 8)
        throw std::invalid_argument("grid: need at least 8 intervals per axis");
    const double hmin = std::min(h_u, h_v);
    if (tau > 0.45 * hmin * hmin * (1.0 + 1e-12))
        throw std::invalid_argument("grid: stability requires tau <= 0.45 min(h_u, h_v)^2");
    if (ramp < 1.0)
        throw std::invalid_argument("grid: ramp factor must be >= 1");
}

double required_margin(const DriftSpec& d, double t)
{
    return 6.0 * std::sqrt(t) + 2.0 * d.sup_norm() * t;
}

RotatedGrid RotatedGrid::for_problem(const DriftSpec& d, double t, Interval x_window, double h, double u_max,
                                     double v_pad)
{
    if (!d.bounded())
        throw std::invalid_argument("unbounded drift unsupported by pde");
    const double margin = required_margin(d, t);
    RotatedGrid g;
    g.h_u = g.h_v = h;
    // Largest step below 0.45 h^2 that keeps the upwind scheme monotone.
    const double a = d.sup_norm();
    g.tau = std::min(0.45 * h * h, 0.99 / (2.0 / (h * h) + 2.0 * kSqrt2 * a / h));
    g.u_max = h * std::ceil(std::max(u_max, margin) / h - 1e-9);
    const double pad = std::max(v_pad, margin);
    const double lo = kSqrt2 * x_window.lo - pad;
    const double hi = kSqrt2 * x_window.hi + pad;
    const int n = std::max(8, static_cast<int>(std::ceil((hi - lo) / h - 1e-9)));
    // Centre the padded window.
    const double extra = n * h - (hi - lo);
    g.v_min = lo - 0.5 * extra;
    g.v_max = g.v_min + n * h;
    if (g.nu() < 8)
        g.u_max = 8 * h;
    return g;
}

WField solve(const DriftSpec& d, double t, const RotatedGrid& g, parallel::Exec exec)
{
    check_inputs(d, t, g);
    const Schedule sched = make_schedule(g, t);
    WField f = initial_field(d, t, g, sched.s0);
    const int nu = g.nu(), nv = g.nv();
    const std::size_t stride = static_cast<std::size_t>(nu) + 1;
    std::vector<double> next(f.values.size());

    // Rotated drift components, tabulated either on the diagonal lattice
    // x = (v_min + k h)/sqrt2 (equal steps) or per cell.
    const bool lattice = std::abs(g.h_u - g.h_v) <= 1e-15 * g.h_u;
    std::vector<double> table, reversed;
    std::vector<double> bu_cells, bv_cells;
    if (lattice) {
        // table[k + nu] = a((v_min + k h)/sqrt2); x1 of cell (i, j) has k = j - i,
        // x2 has k = j + i. The reversed copy makes both indices increase with i.
        const std::size_t len = static_cast<std::size_t>(2 * nu + nv + 1);
        table.resize(len);
        for (int k = -nu; k <= nv + nu; ++k)
            table[static_cast<std::size_t>(k + nu)] = d((g.v_min + k * g.h_u) / kSqrt2);
        reversed.assign(table.rbegin(), table.rend());
    } else {
        bu_cells.resize(f.values.size());
        bv_cells.resize(f.values.size());
        for (int j = 0; j <= nv; ++j)
            for (int i = 0; i <= nu; ++i) {
                const double a1 = d((g.v(j) - g.u(i)) / kSqrt2);
                const double a2 = d((g.v(j) + g.u(i)) / kSqrt2);
                bu_cells[j * stride + i] = (a2 - a1) / kSqrt2;
                bv_cells[j * stride + i] = (a1 + a2) / kSqrt2;
            }
    }

    for (const double dt : sched.steps) {
        const double* cur = f.values.data();
        double* out = next.data();
        double lo = 0.0, hi = 1.0;
        auto do_row = [&](int j) {
            const double* row = cur + j * stride;
            const double* south = cur + (j == 0 ? 1 : j - 1) * stride;
            const double* north = cur + (j == nv ? nv - 1 : j + 1) * stride;
            if (lattice) {
                const std::size_t len = table.size();
                const double* a1 = reversed.data() + (len - 1 - static_cast<std::size_t>(j + nu));
                const double* a2 = table.data() + (j + nu);
                return update_row<true>(south, row, north, out + j * stride, a1, a2, nu, dt, g);
            }
            return update_row<false>(south, row, north, out + j * stride, bu_cells.data() + j * stride,
                                     bv_cells.data() + j * stride, nu, dt, g);
        };
        if (exec == parallel::Exec::parallel) {
#pragma omp parallel for schedule(static) reduction(min : lo) reduction(max : hi)
            for (int j = 0; j <= nv; ++j) {
                const Extremes e = do_row(j);
                lo = std::min(lo, e.lo);
                hi = std::max(hi, e.hi);
            }
        } else {
            for (int j = 0; j <= nv; ++j) {
                const Extremes e = do_row(j);
                lo = std::min(lo, e.lo);
                hi = std::max(hi, e.hi);
            }
        }
        check_extremes({lo, hi}, f);
        f.values.swap(next);
        ++f.steps;
    }
    return f;
}

WField solve_reference(const DriftSpec& d, double t, const RotatedGrid& g)
{
    check_inputs(d, t, g);
    const Schedule sched = make_schedule(g, t);
    WField f = initial_field(d, t, g, sched.s0);
    const int nu = g.nu(), nv = g.nv();
    auto idx = [&](int i, int j) { return static_cast<std::size_t>(j) * (nu + 1) + i; };
    std::vector<double> bu(f.values.size()), bv(f.values.size());
    for (int j = 0; j <= nv; ++j)
        for (int i = 0; i <= nu; ++i) {
            const double a1 = d((g.v(j) - g.u(i)) / kSqrt2);
            const double a2 = d((g.v(j) + g.u(i)) / kSqrt2);
            bu[idx(i, j)] = (a2 - a1) / kSqrt2;
            bv[idx(i, j)] = (a1 + a2) / kSqrt2;
        }
    std::vector<double> next(f.values.size());
    for (const double dt : sched.steps) {
        for (int j = 0; j <= nv; ++j) {
            const int js = j == 0 ? 1 : j - 1;
            const int jn = j == nv ? nv - 1 : j + 1;
            next[idx(0, j)] = 0.0;
            next[idx(nu, j)] = 1.0;
            for (int i = 1; i < nu; ++i) {
                const double c = f.values[idx(i, j)];
                const double e = f.values[idx(i + 1, j)], w = f.values[idx(i - 1, j)];
                const double n = f.values[idx(i, jn)], s = f.values[idx(i, js)];
                const double diffusion =
                    0.5 * (e + w - 2.0 * c) / (g.h_u * g.h_u) + 0.5 * (n + s - 2.0 * c) / (g.h_v * g.h_v);
                const double b_u = bu[idx(i, j)], b_v = bv[idx(i, j)];
                const double du = b_u > 0.0 ? (c - w) / g.h_u : (e - c) / g.h_u;
                const double dv = b_v > 0.0 ? (c - s) / g.h_v : (n - c) / g.h_v;
                next[idx(i, j)] = c + dt * (diffusion - b_u * du - b_v * dv);
            }
        }
        const auto [lo, hi] = std::minmax_element(next.begin(), next.end());
        check_extremes({*lo, *hi}, f);
        f.values.swap(next);
        ++f.steps;
    }
    return f;
}

DensityEstimate density_from_field(const WField& f, double x)
{
    const RotatedGrid& g = f.grid;
    const double v = kSqrt2 * x;
    const double margin = 6.0 * std::sqrt(f.t) + 2.0 * f.sup_norm * f.t;
    if (v < g.v_min + margin - 1e-9 || v > g.v_max - margin + 1e-9)
        throw std::out_of_range("pde: x = " + format_real(x) + " outside the safe evaluation window");
    const double s = (v - g.v_min) / g.h_v;
    const int j = std::min(static_cast<int>(s), g.nv() - 1);
    const double w = s - j;
    auto slope2 = [&](int jj) { return (-3.0 * f.at(0, jj) + 4.0 * f.at(1, jj) - f.at(2, jj)) / (2.0 * g.h_u); };
    auto slope3 = [&](int jj) {
        return (-11.0 * f.at(0, jj) + 18.0 * f.at(1, jj) - 9.0 * f.at(2, jj) + 2.0 * f.at(3, jj)) / (6.0 * g.h_u);
    };
    const double d2 = (1.0 - w) * slope2(j) + w * slope2(j + 1);
    const double d3 = (1.0 - w) * slope3(j) + w * slope3(j + 1);
    DensityEstimate est;
    est.method = Method::pde;
    est.value = d2 / kSqrt2;
    // Stencil disagreement + first-order upwind and start-up allowances.
    const double h = std::max(g.h_u, g.h_v);
    est.det_bound = std::abs(d2 - d3) / kSqrt2 + est.value * (f.sup_norm * (h + f.s0) + g.tau);
    return est;
}

void write_field_csv(const WField& f, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write field to '" + path + "'");
    out << "u,v,W\n";
    out.precision(17);
    for (int j = 0; j <= f.grid.nv(); ++j)
        for (int i = 0; i <= f.grid.nu(); ++i)
            out << f.grid.u(i) << ',' << f.grid.v(j) << ',' << f.at(i, j) << '\n';
}

} // namespace arratia::pde
