#include "arratia/parallel.hpp"
#include "arratia/series.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>

using namespace arratia;

namespace {
const double kInvSqrtPi = 1.0 / std::sqrt(std::numbers::pi);

series::Config small(std::uint64_t samples = 200000)
{
    series::Config c;
    c.samples = samples;
    return c;
}
} // namespace

TEST_CASE("driftless survival")
{
    CHECK(series::W0(WedgePoint(0.3, 0.3), 1.0) == 0.0);
    CHECK(series::W0(WedgePoint(0, 1), 1.0) == doctest::Approx(std::erf(0.5)).epsilon(1e-15));
    CHECK(series::W0(WedgePoint(0, 1), 1.0) == doctest::Approx(0.5204999).epsilon(1e-7));
    CHECK(std::abs(series::W0(WedgePoint(0, 100), 1.0) - 1.0) < 1e-12);
    CHECK_THROWS(series::W0(WedgePoint(0, 1), 0.0));

    const auto g = series::grad_W0(WedgePoint(2, 2), 1.0);
    CHECK(g[1] == doctest::Approx(kInvSqrtPi).epsilon(1e-15));
    CHECK(g[0] + g[1] == 0.0);
    const double h = 1e-6, s = 0.7;
    const auto a = series::grad_W0(WedgePoint(0, 0.5), s);
    const double fd = (series::W0(WedgePoint(0, 0.5 + h), s) - series::W0(WedgePoint(0, 0.5 - h), s)) / (2 * h);
    CHECK(std::abs(a[1] - fd) < 1e-7);
}

TEST_CASE("zero drift collapses to the leading term")
{
    const auto z = DriftSpec::zero();
    for (int n = 0; n <= 4; ++n) {
        const auto term = series::density_term(n, 0.4, 1.0, z, small());
        CHECK(term.value == (n == 0 ? kInvSqrtPi : 0.0));
        CHECK(term.stderr_ == 0.0);
        if (n >= 1)
            CHECK(series::survival_term(n, WedgePoint(0, 1), 1.0, z, small()).value == 0.0);
    }
    for (double t : {0.25, 1.0, 4.0}) {
        const auto e = series::density_series(0.0, t, z, 1e-12);
        CHECK(std::abs(e.value * std::sqrt(std::numbers::pi * t) - 1.0) < 1e-12);
        CHECK(e.det_bound == 0.0);
        CHECK(e.flag == "ok");
    }
    CHECK(series::density_series(0.0, 0.25, z, 1e-12).value == doctest::Approx(1.1283792).epsilon(1e-7));
    const auto p = series::W_partial(WedgePoint(0, 1), 1.0, z, 3);
    CHECK(p.value == series::W0(WedgePoint(0, 1), 1.0));
}

TEST_CASE("constant drift terms vanish")
{
    // Translation invariance: the drift enters only through a(y2) - a(y1).
    const auto c = DriftSpec::constant(0.5);
    double sum = 0.0, var = 0.0;
    for (int n = 1; n <= 3; ++n) {
        const auto term = series::density_term(n, 0.0, 1.0, c, small());
        sum += term.value;
        var += term.stderr_ * term.stderr_;
    }
    CHECK(std::abs(sum) <= series::density_tail_bound(0, 1.0, 0.5) + 3 * std::sqrt(var));
    CHECK(std::abs(sum) < 1e-12);
}

TEST_CASE("unbounded drift and order limits are refused")
{
    try {
        series::density_term(1, 0.0, 1.0, DriftSpec::linear(1), small());
        FAIL("expected an exception");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()) == "unbounded drift unsupported by series");
    }
    CHECK_THROWS_AS(series::density_series(0.0, 1.0, DriftSpec::linear(1), 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(series::density_term(5, 0.0, 1.0, DriftSpec::tanh(0.5, 1), small()), std::invalid_argument);
}

TEST_CASE("truncation bounds")
{
    for (int n = 1; n <= 6; ++n)
        CHECK(series::truncation_bound(n, 1.0, 0.0) == 0.0);
    double prev_ratio = INFINITY;
    for (int n = 1; n <= 8; ++n) {
        const double b = series::truncation_bound(n, 1.0, 0.5);
        CHECK(series::truncation_bound(n, 1.0, 0.6) > b);
        // s^{(n-1)/2}: flat in s for n = 1
        if (n >= 2)
            CHECK(series::truncation_bound(n, 1.3, 0.5) > b);
        else
            CHECK(series::truncation_bound(n, 1.3, 0.5) == doctest::Approx(b));
        const double ratio = series::truncation_bound(n + 1, 1.0, 0.5) / b;
        CHECK(ratio < prev_ratio);
        prev_ratio = ratio;
    }
    CHECK(series::density_tail_bound(2, 1.0, 0.0) == 0.0);
    CHECK(series::density_tail_bound(2, 1.0, 0.5) > series::density_tail_bound(3, 1.0, 0.5));
}

TEST_CASE("first-order term: quadrature agrees with Monte Carlo")
{
    const auto d = DriftSpec::tanh(0.5, 1);
    const auto q = series::density_term(1, 0.0, 1.0, d, small());
    const auto m = series::density_term_mc(1, 0.0, 1.0, d, small(400000));
    CHECK(std::abs(q.value - m.value) <= 3 * m.stderr_ + q.quadrature_error);
    const auto qs = series::survival_term(1, WedgePoint(-0.3, 0.4), 0.8, d, small());
    const auto ms = series::survival_term_mc(1, WedgePoint(-0.3, 0.4), 0.8, d, small(400000));
    CHECK(std::abs(qs.value - ms.value) <= 3 * ms.stderr_ + qs.quadrature_error);
}

TEST_CASE("term bounds dominate the terms")
{
    for (const auto& d : {DriftSpec::tanh(0.5, 1), DriftSpec::step(0.7, -0.5, 1.0), DriftSpec::constant(1.0)})
        for (int n = 1; n <= 3; ++n) {
            const auto term = series::density_term(n, 0.1, 1.0, d, small());
            CHECK(std::abs(term.value) <= series::truncation_bound(n, 1.0, d.sup_norm()) + 3 * term.stderr_);
        }
}

TEST_CASE("Monte Carlo terms do not depend on the worker count")
{
    const auto d = DriftSpec::tanh(0.5, 1);
    auto cfg = small(50000);
    cfg.exec = parallel::Exec::serial;
    const double ref = series::density_term(2, 0.0, 1.0, d, cfg).value;
    cfg.exec = parallel::Exec::parallel;
    for (int threads : {1, 4, 16}) {
        parallel::set_threads(threads);
        const double v = series::density_term(2, 0.0, 1.0, d, cfg).value;
        CHECK(std::memcmp(&v, &ref, sizeof v) == 0);
    }
    parallel::set_threads(1);
}

TEST_CASE("tolerance flag")
{
    const auto e = series::density_series(0.0, 1.0, DriftSpec::tanh(0.5, 1), 1e-6, small(20000));
    // The constructive tail bound is far above 1e-6 at n_max = 4.
    CHECK(e.flag == "tol_not_met");
    CHECK(e.det_bound > 1e-6);
    CHECK(e.stat_error > 0.0);
}
