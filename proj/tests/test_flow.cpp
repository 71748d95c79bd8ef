#include "arratia/flow.hpp"
#include "arratia/parallel.hpp"
#include "arratia/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

using namespace arratia;

namespace {

flow::FlowConfig config(double U, double t = 1.0, std::uint64_t runs = 200)
{
    flow::FlowConfig c;
    c.half_width = U;
    c.t = t;
    c.n_runs = runs;
    return c;
}

const double kDensity1 = 1.0 / std::sqrt(std::numbers::pi);

} // namespace

TEST_CASE("order and mass are preserved")
{
    rng::Stream s(3, 0, 0);
    const DriftSpec drifts[] = {DriftSpec::zero(), DriftSpec::tanh(1, 0.5), DriftSpec::step(-2, -1, 1),
                                DriftSpec::linear(-1), DriftSpec::constant(3)};
    for (const auto& d : drifts)
        for (int k = 0; k < 5; ++k) {
            auto cfg = config(2.0 + 3 * s.uniform(), 0.2 + s.uniform());
            cfg.spacing = 0.02;
            cfg.dt = 2e-3;
            cfg.seed = 100 + k;
            const auto sample = flow::simulate_flow(d, cfg, k);
            REQUIRE(!sample.positions.empty());
            for (std::size_t i = 1; i < sample.positions.size(); ++i)
                REQUIRE(sample.positions[i] > sample.positions[i - 1]);
            const auto total = std::accumulate(sample.masses.begin(), sample.masses.end(), std::uint64_t{0});
            CHECK(total == 2 * static_cast<std::uint64_t>(std::floor(cfg.half_width / cfg.spacing + 1e-9)) + 1);
        }
}

TEST_CASE("a single starter is a Brownian path")
{
    auto cfg = config(0.01, 1.0, 4000);
    cfg.spacing = 0.02; // only the starter at 0
    const auto runs = flow::simulate_runs(DriftSpec::zero(), cfg);
    double sum = 0.0, sq = 0.0;
    for (const auto& r : runs) {
        REQUIRE(r.positions.size() == 1);
        sum += r.positions[0];
        sq += r.positions[0] * r.positions[0];
    }
    const double n = static_cast<double>(runs.size());
    CHECK(std::abs(sum / n) < 3.0 / std::sqrt(n));
    CHECK(std::abs(sq / n - 1.0) < 5.0 * std::sqrt(2.0 / n));
}

TEST_CASE("cluster count in a window")
{
    const auto cfg = config(10.0);
    const auto runs = flow::simulate_runs(DriftSpec::zero(), cfg);
    const auto h = flow::empirical_density(runs, {-5, 5}, 20, DriftSpec::zero(), cfg);
    CHECK(std::abs(h.pooled.value * 10.0 / (10.0 * kDensity1) - 1.0) < 0.05);
    CHECK(h.bins.size() == 20);
    CHECK(h.edges.front() == -5.0);
    CHECK(h.edges.back() == 5.0);
    double mean = 0.0;
    for (const auto& b : h.bins)
        mean += b.value / 20.0;
    CHECK(mean == doctest::Approx(h.pooled.value));
    // window violating the margin
    CHECK_THROWS_AS(flow::empirical_density(runs, {-8, 0}, 4, DriftSpec::zero(), cfg), std::invalid_argument);
    // no clusters at all in a far window
    const auto empty = flow::empirical_density(runs, {50, 51}, 2, Interval{-100, 100});
    CHECK(empty.pooled.value == 0.0);
    CHECK(empty.bins[1].value == 0.0);
}

TEST_CASE("starter refinement and domain size do not move the density")
{
    const auto z = DriftSpec::zero();
    auto base = config(12.0, 1.0, 300);
    const auto ref = flow::empirical_density(flow::simulate_runs(z, base), {-6, 6}, 1, z, base).pooled;
    auto fine = base;
    fine.spacing = 0.005;
    fine.seed = 7;
    const auto hf = flow::empirical_density(flow::simulate_runs(z, fine), {-6, 6}, 1, z, fine).pooled;
    CHECK(std::abs(hf.value - ref.value) < 2 * std::hypot(hf.stat_error, ref.stat_error));
    auto wide = base;
    wide.half_width = 24;
    wide.seed = 8;
    const auto hw = flow::empirical_density(flow::simulate_runs(z, wide), {-6, 6}, 1, z, wide).pooled;
    CHECK(std::abs(hw.value - ref.value) < 2 * std::hypot(hw.stat_error, ref.stat_error));
}

TEST_CASE("meeting probability")
{
    auto cfg = config(1.0, 1.0, 100000);
    CHECK(flow::meeting_probability(0.3, 0.3, DriftSpec::zero(), cfg).p == 0.0);
    CHECK_THROWS(flow::meeting_probability(1.0, 0.0, DriftSpec::zero(), cfg));
    const auto m = flow::meeting_probability(0.0, 0.5, DriftSpec::zero(), cfg);
    // The gap is a Brownian motion with variance 2 per unit time.
    CHECK(std::abs(m.p - std::erf(0.25)) <= 3 * m.stderr_);
}

TEST_CASE("duality")
{
    auto cfg = config(5.0, 1.0, 4000);
    const auto zero = flow::duality_check(0.0, 0.3, DriftSpec::zero(), cfg);
    CHECK(std::abs(zero.lhs.p - zero.rhs.p) <= 3 * zero.combined_stderr);
    cfg.half_width = 6.0;
    const auto k = flow::duality_check(0.0, 0.3, DriftSpec::constant(1), cfg);
    CHECK(std::abs(k.lhs.p - k.rhs.p) <= 3 * k.combined_stderr);
}

TEST_CASE("runs do not depend on the worker count")
{
    auto cfg = config(3.0, 0.5, 16);
    cfg.exec = parallel::Exec::serial;
    const auto ref = flow::simulate_runs(DriftSpec::tanh(0.5, 1), cfg);
    cfg.exec = parallel::Exec::parallel;
    for (int threads : {1, 4, 16}) {
        parallel::set_threads(threads);
        const auto got = flow::simulate_runs(DriftSpec::tanh(0.5, 1), cfg);
        REQUIRE(got.size() == ref.size());
        for (std::size_t r = 0; r < got.size(); ++r) {
            CHECK(got[r].positions == ref[r].positions);
            CHECK(got[r].masses == ref[r].masses);
        }
    }
    parallel::set_threads(1);
}

TEST_CASE("configuration checks")
{
    auto cfg = config(5.0);
    cfg.spacing = 0.1;
    CHECK_THROWS_AS(cfg.validate(DriftSpec::zero()), std::invalid_argument);
    cfg = config(5.0);
    cfg.eval_margin = 1.0;
    CHECK_THROWS_AS(cfg.validate(DriftSpec::zero()), std::invalid_argument);
    cfg = config(5.0);
    cfg.dt = 0.1;
    CHECK_THROWS_AS(cfg.validate(DriftSpec::zero()), std::invalid_argument);
    const auto lin = flow::usable_window(DriftSpec::linear(1), config(20.0));
    CHECK(lin.hi > 40.0);
}
