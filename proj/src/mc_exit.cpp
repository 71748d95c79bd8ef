#include "arratia/mc_exit.hpp"

#include "arratia/config.hpp"
#include "arratia/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace arratia::mc {

namespace {

struct Stepping {
    long steps;
    double dt;
};

Stepping stepping(double t, double dt)
{
    const long n = std::max(1L, static_cast<long>(std::ceil(t / dt - 1e-9)));
    return {n, t / static_cast<double>(n)};
}

double path_weight(WedgePoint x, const DriftSpec& d, const Stepping& st, bool bridge, rng::Stream& rng)
{
    double x1 = x.point().x1, x2 = x.point().x2;
    double gap = x2 - x1;
    const double sq = std::sqrt(st.dt);
    double w = 1.0;
    for (long k = 0; k < st.steps; ++k) {
        x1 += -d(x1) * st.dt + sq * rng.normal();
        x2 += -d(x2) * st.dt + sq * rng.normal();
        const double next = x2 - x1;
        if (next <= 0.0)
            return 0.0;
        if (bridge)
            w *= -std::expm1(-gap * next / st.dt);
        gap = next;
    }
    return w;
}

std::string digest(WedgePoint x, double t, const DriftSpec& d, const PathConfig& cfg)
{
    RunConfig c;
    c.set("method", "mc");
    c.set("drift", d.describe());
    c.set("t", t);
    c.set("x1", x.point().x1);
    c.set("x2", x.point().x2);
    c.set("paths", std::to_string(cfg.n_paths));
    c.set("dt", cfg.dt);
    c.set("bridge", cfg.bridge_correction ? "true" : "false");
    c.set("seed", std::to_string(cfg.seed));
    return c.digest();
}

} // namespace

void PathConfig::validate(double t) const
{
    if (n_paths < 1000)
        throw std::invalid_argument("mc: need at least 1000 paths");
    if (!(dt > 0.0) || dt > t / 20.0 * (1.0 + 1e-12))
        throw std::invalid_argument("mc: dt must be positive and at most t/20");
}

SurvivalEstimate survival(WedgePoint x, double t, const DriftSpec& d, const PathConfig& cfg)
{
    if (!(t > 0.0))
        throw std::domain_error("mc: t must be positive");
    cfg.validate(t);
    SurvivalEstimate est;
    est.n_paths = cfg.n_paths;
    est.config_digest = digest(x, t, d, cfg);
    if (!x.interior())
        return est;
    const Stepping st = stepping(t, cfg.dt);
    const auto m = parallel::reduce<parallel::Moments>(
        cfg.n_paths,
        [&](std::size_t i) {
            rng::Stream rng(cfg.seed, 0, i);
            return parallel::Moments::of(path_weight(x, d, st, cfg.bridge_correction, rng));
        },
        cfg.exec);
    est.p_hat = m.mean();
    est.stderr_ = m.stderr_mean();
    return est;
}

SurvivalEstimate survival_reference(WedgePoint x, double t, const DriftSpec& d, const PathConfig& cfg)
{
    if (!(t > 0.0))
        throw std::domain_error("mc: t must be positive");
    cfg.validate(t);
    SurvivalEstimate est;
    est.n_paths = cfg.n_paths;
    est.config_digest = digest(x, t, d, cfg);
    if (!x.interior())
        return est;
    const Stepping st = stepping(t, cfg.dt);
    double sum = 0.0, sum_sq = 0.0;
    for (std::uint64_t i = 0; i < cfg.n_paths; ++i) {
        rng::Stream rng(cfg.seed, 0, i);
        const double w = path_weight(x, d, st, cfg.bridge_correction, rng);
        sum += w;
        sum_sq += w * w;
    }
    const double n = static_cast<double>(cfg.n_paths);
    est.p_hat = sum / n;
    est.stderr_ = std::sqrt(std::max(0.0, (sum_sq - n * est.p_hat * est.p_hat) / (n - 1.0)) / n);
    return est;
}

double default_delta(double t) { return 0.02 * std::sqrt(t); }

DensityEstimate density_mc(double u, double t, double delta, const DriftSpec& d, const PathConfig& cfg,
                           bool richardson)
{
    if (!(delta > 0.0))
        throw std::invalid_argument("mc: delta must be positive");
    DensityEstimate est;
    est.method = Method::mc;
    est.seed = cfg.seed;
    const SurvivalEstimate s = survival(WedgePoint(u, u + delta), t, d, cfg);
    est.config_digest = s.config_digest;
    if (!richardson) {
        est.value = s.p_hat / delta;
        est.stat_error = s.stderr_ / delta;
    } else {
        const SurvivalEstimate h = survival(WedgePoint(u, u + 0.5 * delta), t, d, cfg);
        const double p1 = s.p_hat / delta;
        const double p2 = h.p_hat / (0.5 * delta);
        est.value = 2.0 * p2 - p1;
        // Conservative: the two quotients share random numbers.
        est.stat_error = 2.0 * h.stderr_ / (0.5 * delta) + s.stderr_ / delta;
        est.det_bound = std::abs(p1 - p2);
    }
    if (delta > 0.1 * std::sqrt(t))
        est.flag = "delta_large";
    return est;
}

} // namespace arratia::mc
