#include "arratia/flow.hpp"

#include "arratia/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace arratia::flow {

namespace {

// Stream ids; mc_exit uses 0.
constexpr std::uint64_t kFlowStream = 1;
constexpr std::uint64_t kPairStream = 2;

struct Cluster {
    double pos;
    double prev;
    std::uint64_t mass;
};

// Advance the clusters to time t. Steps start at dt_start and double up to
// dt_max, so the first steps resolve the initial spacing. Returns early once
// a single cluster is left if stop_when_single is set.
void evolve(std::vector<Cluster>& cs, const DriftSpec& d, double t, double dt_max, double dt_start, bool bridge,
            bool stop_when_single, rng::Stream& rng)
{
    const long steps = std::max(1L, static_cast<long>(std::ceil(t / dt_max - 1e-9)));
    const double dt_uniform = t / static_cast<double>(steps);
    double h = std::min(dt_start, dt_uniform);
    double s = 0.0;
    std::vector<Cluster> out;
    out.reserve(cs.size());
    while (s < t) {
        if (stop_when_single && cs.size() <= 1)
            return;
        const double dt = t - s <= h * (1.0 + 1e-9) ? t - s : h;
        s = dt == t - s ? t : s + dt;
        h = std::min(2.0 * h, dt_uniform);
        const double sq = std::sqrt(dt);
        for (Cluster& c : cs) {
            c.prev = c.pos;
            c.pos += d(c.pos) * dt + sq * rng.normal();
        }
        out.clear();
        for (Cluster cur : cs) {
            while (!out.empty()) {
                const Cluster& top = out.back();
                bool merge = top.pos >= cur.pos;
                if (!merge && bridge) {
                    const double e = (cur.prev - top.prev) * (cur.pos - top.pos) / dt;
                    // exp(-40) is far below double resolution of a uniform.
                    merge = e < 40.0 && rng.uniform() < std::exp(-e);
                }
                if (!merge)
                    break;
                cur = {0.5 * (top.pos + cur.pos), 0.5 * (top.prev + cur.prev), top.mass + cur.mass};
                out.pop_back();
            }
            out.push_back(cur);
        }
        cs.swap(out);
    }
}

std::vector<Cluster> starters(const FlowConfig& cfg)
{
    const long k = static_cast<long>(std::floor(cfg.half_width / cfg.spacing + 1e-9));
    std::vector<Cluster> cs;
    cs.reserve(static_cast<std::size_t>(2 * k + 1));
    for (long i = -k; i <= k; ++i)
        cs.push_back({static_cast<double>(i) * cfg.spacing, 0.0, 1});
    return cs;
}

} // namespace

double FlowConfig::margin(const DriftSpec& d) const
{
    if (eval_margin > 0.0)
        return eval_margin;
    return 4.0 * std::sqrt(t) + (d.bounded() ? d.sup_norm() * t : 0.0);
}

void FlowConfig::validate(const DriftSpec& d) const
{
    if (!(half_width > 0.0 && spacing > 0.0 && dt > 0.0 && t > 0.0) || n_runs == 0)
        throw std::invalid_argument("flow: sizes must be positive");
    if (spacing > 0.05 * std::sqrt(t) * (1.0 + 1e-12))
        throw std::invalid_argument("flow: spacing must not exceed 0.05 sqrt(t)");
    if (dt > t / 20.0 * (1.0 + 1e-12))
        throw std::invalid_argument("flow: dt must not exceed t/20");
    if (d.bounded() && eval_margin > 0.0 && eval_margin < 4.0 * std::sqrt(t) + d.sup_norm() * t - 1e-12)
        throw std::invalid_argument("flow: evaluation margin below 4 sqrt(t) + |a| t");
}

PointProcessSample simulate_flow(const DriftSpec& d, const FlowConfig& cfg, std::uint64_t run)
{
    cfg.validate(d);
    rng::Stream rng(cfg.seed, kFlowStream, run);
    std::vector<Cluster> cs = starters(cfg);
    evolve(cs, d, cfg.t, cfg.dt, cfg.spacing * cfg.spacing, cfg.bridge_merge, false, rng);
    PointProcessSample s;
    s.run = run;
    s.positions.reserve(cs.size());
    s.masses.reserve(cs.size());
    for (const Cluster& c : cs) {
        s.positions.push_back(c.pos);
        s.masses.push_back(c.mass);
    }
    return s;
}

std::vector<PointProcessSample> simulate_runs(const DriftSpec& d, const FlowConfig& cfg)
{
    cfg.validate(d);
    if (cfg.exec == parallel::Exec::serial)
        return simulate_runs_reference(d, cfg);
    std::vector<PointProcessSample> out(cfg.n_runs);
    const long long n = static_cast<long long>(cfg.n_runs);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long r = 0; r < n; ++r)
        out[static_cast<std::size_t>(r)] = simulate_flow(d, cfg, static_cast<std::uint64_t>(r));
    return out;
}

std::vector<PointProcessSample> simulate_runs_reference(const DriftSpec& d, const FlowConfig& cfg)
{
    std::vector<PointProcessSample> out;
    out.reserve(cfg.n_runs);
    for (std::uint64_t r = 0; r < cfg.n_runs; ++r)
        out.push_back(simulate_flow(d, cfg, r));
    return out;
}

Interval usable_window(const DriftSpec& d, const FlowConfig& cfg)
{
    if (const auto* lin = std::get_if<drift::Linear>(&d.kind())) {
        const double c = lin->c;
        const double sigma = std::sqrt(std::expm1(2.0 * c * cfg.t) / (2.0 * c));
        const double half = cfg.half_width * std::exp(c * cfg.t) - std::max(4.0 * sigma, cfg.eval_margin);
        return {-half, half};
    }
    const double m = cfg.margin(d);
    return {-cfg.half_width + m, cfg.half_width - m};
}

Histogram empirical_density(const std::vector<PointProcessSample>& samples, Interval window, int bins,
                            Interval allowed)
{
    if (samples.empty())
        throw std::invalid_argument("flow: no runs to average");
    if (bins < 1 || !(window.hi > window.lo))
        throw std::invalid_argument("flow: need a non-empty window and at least one bin");
    if (window.lo < allowed.lo - 1e-12 || window.hi > allowed.hi + 1e-12)
        throw std::invalid_argument("flow: window [" + format_real(window.lo) + ", " + format_real(window.hi) +
                                    "] violates the margin; usable [" + format_real(allowed.lo) + ", " +
                                    format_real(allowed.hi) + "]");
    const double width = window.length() / bins;
    Histogram h;
    h.window = window;
    for (int b = 0; b <= bins; ++b)
        h.edges.push_back(b == bins ? window.hi : window.lo + b * width);
    std::vector<parallel::Moments> per_bin(static_cast<std::size_t>(bins));
    parallel::Moments total;
    std::vector<double> counts(static_cast<std::size_t>(bins));
    for (const auto& s : samples) {
        std::fill(counts.begin(), counts.end(), 0.0);
        double all = 0.0;
        for (const double x : s.positions) {
            if (x < window.lo || x > window.hi)
                continue;
            const int b = std::min(bins - 1, static_cast<int>((x - window.lo) / width));
            counts[static_cast<std::size_t>(b)] += 1.0;
            all += 1.0;
        }
        for (int b = 0; b < bins; ++b)
            per_bin[static_cast<std::size_t>(b)] =
                per_bin[static_cast<std::size_t>(b)] + parallel::Moments::of(counts[static_cast<std::size_t>(b)]);
        total = total + parallel::Moments::of(all);
    }
    auto make = [](const parallel::Moments& m, double w) {
        DensityEstimate e;
        e.method = Method::flow;
        e.value = m.mean() / w;
        e.stat_error = m.stderr_mean() / w;
        return e;
    };
    for (int b = 0; b < bins; ++b)
        h.bins.push_back(make(per_bin[static_cast<std::size_t>(b)], h.edges[b + 1] - h.edges[b]));
    h.pooled = make(total, window.length());
    return h;
}

Histogram empirical_density(const std::vector<PointProcessSample>& samples, Interval window, int bins,
                            const DriftSpec& d, const FlowConfig& cfg)
{
    return empirical_density(samples, window, bins, usable_window(d, cfg));
}

ProbabilityEstimate meeting_probability(double u, double v, const DriftSpec& d, const FlowConfig& cfg)
{
    if (u > v)
        throw std::invalid_argument("flow: meeting probability needs u <= v");
    cfg.validate(d);
    ProbabilityEstimate est;
    est.runs = cfg.n_runs;
    if (u == v)
        return est;
    const auto m = parallel::reduce<parallel::Moments>(
        cfg.n_runs,
        [&](std::size_t r) {
            rng::Stream rng(cfg.seed, kPairStream, r);
            std::vector<Cluster> cs{{u, u, 1}, {v, v, 1}};
            evolve(cs, d, cfg.t, cfg.dt, (v - u) * (v - u), cfg.bridge_merge, true, rng);
            return parallel::Moments::of(cs.size() == 2 ? 1.0 : 0.0);
        },
        cfg.exec);
    est.p = m.mean();
    est.stderr_ = m.stderr_mean();
    return est;
}

ProbabilityEstimate occupancy_probability(double u, double v, const DriftSpec& d, const FlowConfig& cfg)
{
    if (u > v)
        throw std::invalid_argument("flow: occupancy needs u <= v");
    cfg.validate(d);
    const Interval allowed = usable_window(d, cfg);
    if (u < allowed.lo || v > allowed.hi)
        throw std::invalid_argument("flow: [u, v] violates the margin");
    const auto m = parallel::reduce<parallel::Moments>(
        cfg.n_runs,
        [&](std::size_t r) {
            const PointProcessSample s = simulate_flow(d, cfg, r);
            const auto it = std::lower_bound(s.positions.begin(), s.positions.end(), u);
            return parallel::Moments::of(it != s.positions.end() && *it <= v ? 1.0 : 0.0);
        },
        cfg.exec);
    ProbabilityEstimate est;
    est.runs = cfg.n_runs;
    est.p = m.mean();
    est.stderr_ = m.stderr_mean();
    return est;
}

DualityResult duality_check(double u, double v, const DriftSpec& d, const FlowConfig& cfg)
{
    DualityResult r;
    r.lhs = occupancy_probability(u, v, d, cfg);
    r.rhs = meeting_probability(u, v, d.negate(), cfg);
    r.combined_stderr = std::hypot(r.lhs.stderr_, r.rhs.stderr_);
    return r;
}

void write_samples_csv(const std::vector<PointProcessSample>& samples, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write samples to '" + path + "'");
    out << "run_id,position,mass\n";
    out.precision(17);
    for (const auto& s : samples)
        for (std::size_t i = 0; i < s.positions.size(); ++i)
            out << s.run << ',' << s.positions[i] << ',' << s.masses[i] << '\n';
}

} // namespace arratia::flow
