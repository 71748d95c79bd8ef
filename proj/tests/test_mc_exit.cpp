#include "arratia/mc_exit.hpp"
#include "arratia/parallel.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>

using namespace arratia;

namespace {

mc::PathConfig paths(std::uint64_t n, double dt = 1e-3, std::uint64_t seed = 20240501)
{
    mc::PathConfig c;
    c.n_paths = n;
    c.dt = dt;
    c.seed = seed;
    return c;
}

} // namespace

TEST_CASE("driftless survival matches erf")
{
    const auto s = mc::survival(WedgePoint(0, 1), 1.0, DriftSpec::zero(), paths(100000));
    CHECK(std::abs(s.p_hat - std::erf(0.5)) <= 3 * s.stderr_);
    CHECK(s.stderr_ > 0.0);
    CHECK(s.n_paths == 100000);
    CHECK(s.config_digest.size() == 16);
}

TEST_CASE("constant drift cancels in the gap")
{
    for (double k : {-2.0, 1.0}) {
        const auto s = mc::survival(WedgePoint(0, 1), 1.0, DriftSpec::constant(k), paths(50000));
        CHECK(std::abs(s.p_hat - std::erf(0.5)) <= 3 * s.stderr_);
    }
}

TEST_CASE("start on the diagonal")
{
    const auto s = mc::survival(WedgePoint(0.4, 0.4), 1.0, DriftSpec::tanh(1, 1), paths(1000));
    CHECK(s.p_hat == 0.0);
    CHECK(s.stderr_ == 0.0);
}

TEST_CASE("monotonicity in time and in the gap")
{
    const auto d = DriftSpec::tanh(0.5, 1);
    const auto cfg = paths(20000);
    const auto a = mc::survival(WedgePoint(0, 0.5), 0.5, d, cfg);
    const auto b = mc::survival(WedgePoint(0, 0.5), 1.0, d, cfg);
    CHECK(a.p_hat >= b.p_hat - 3 * (a.stderr_ + b.stderr_));
    const auto c = mc::survival(WedgePoint(0, 0.8), 1.0, d, cfg);
    CHECK(c.p_hat >= b.p_hat - 3 * (b.stderr_ + c.stderr_));
}

TEST_CASE("bridge correction")
{
    const auto z = DriftSpec::zero();
    const WedgePoint x(0, 1);
    auto on = paths(100000, 1e-3);
    const auto p1 = mc::survival(x, 1.0, z, on);
    on.dt = 5e-4;
    const auto p2 = mc::survival(x, 1.0, z, on);
    CHECK(std::abs(p1.p_hat - p2.p_hat) < 3 * std::hypot(p1.stderr_, p2.stderr_));

    auto off = paths(100000, 1e-2);
    off.bridge_correction = false;
    const auto coarse = mc::survival(x, 1.0, z, off);
    off.dt = 1e-3;
    const auto fine = mc::survival(x, 1.0, z, off);
    CHECK(fine.p_hat >= p1.p_hat - 3 * std::hypot(fine.stderr_, p1.stderr_));
    CHECK(coarse.p_hat > fine.p_hat);
    CHECK(coarse.p_hat - std::erf(0.5) > 3 * coarse.stderr_);
}

TEST_CASE("seeded results are identical for every worker count")
{
    const auto d = DriftSpec::tanh(0.5, 1);
    auto cfg = paths(5000, 1e-2);
    cfg.exec = parallel::Exec::serial;
    const auto ref = mc::survival(WedgePoint(0, 0.3), 1.0, d, cfg);
    cfg.exec = parallel::Exec::parallel;
    for (int threads : {1, 4, 16}) {
        parallel::set_threads(threads);
        const auto s = mc::survival(WedgePoint(0, 0.3), 1.0, d, cfg);
        CHECK(std::memcmp(&s.p_hat, &ref.p_hat, sizeof(double)) == 0);
        CHECK(std::memcmp(&s.stderr_, &ref.stderr_, sizeof(double)) == 0);
    }
    parallel::set_threads(1);
    const auto plain = mc::survival_reference(WedgePoint(0, 0.3), 1.0, d, cfg);
    CHECK(std::abs(plain.p_hat - ref.p_hat) < 1e-12);
    CHECK(std::abs(plain.stderr_ - ref.stderr_) < 1e-12);
    cfg.seed += 1;
    CHECK(mc::survival(WedgePoint(0, 0.3), 1.0, d, cfg).p_hat != ref.p_hat);
}

TEST_CASE("density quotient")
{
    const auto cfg = paths(100000);
    const auto z = mc::density_mc(0.0, 1.0, 0.02, DriftSpec::zero(), cfg);
    const double exact = 1.0 / std::sqrt(std::numbers::pi);
    CHECK(std::abs(z.value - exact) <= 3 * z.stat_error + 0.02 * exact);
    CHECK(z.method == Method::mc);
    CHECK(z.seed.value() == cfg.seed);
    CHECK(z.flag == "ok");

    // Drift sign: X moves with +a, the pair with -a, so c = +1 spreads mass out.
    const auto lin = mc::density_mc(0.0, 1.0, 0.02, DriftSpec::linear(1), paths(50000));
    const double target = std::sqrt(2.0 / std::numbers::pi) / std::sqrt(std::exp(2.0) - 1.0);
    CHECK(std::abs(lin.value - target) <= 3 * lin.stat_error + 0.02 * target);
    CHECK(lin.value < 0.5);

    const auto r = mc::density_mc(0.0, 1.0, 0.04, DriftSpec::zero(), paths(50000), true);
    CHECK(r.det_bound > 0.0);
    CHECK(std::abs(r.value - exact) <= 3 * r.stat_error + r.det_bound + 0.02 * exact);

    CHECK(mc::density_mc(0.0, 1.0, 0.2, DriftSpec::zero(), paths(2000)).flag == "delta_large");
    CHECK_THROWS_AS(mc::density_mc(0.0, 1.0, 0.0, DriftSpec::zero(), paths(2000)), std::invalid_argument);
}

TEST_CASE("configuration checks")
{
    CHECK_THROWS_AS(mc::survival(WedgePoint(0, 1), 1.0, DriftSpec::zero(), paths(10)), std::invalid_argument);
    CHECK_THROWS_AS(mc::survival(WedgePoint(0, 1), 1.0, DriftSpec::zero(), paths(1000, 0.1)), std::invalid_argument);
    CHECK_THROWS_AS(mc::survival(WedgePoint(0, 1), -1.0, DriftSpec::zero(), paths(1000)), std::domain_error);
}
