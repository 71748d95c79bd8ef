#include "arratia/drift.hpp"
#include "arratia/rng.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

using namespace arratia;

namespace {

DriftSpec random_drift(rng::Stream& s, bool allow_linear)
{
    auto uni = [&](double lo, double hi) { return lo + (hi - lo) * s.uniform(); };
    switch (static_cast<int>(s.uniform() * (allow_linear ? 7 : 6))) {
    case 0: return DriftSpec::zero();
    case 1: return DriftSpec::constant(uni(-3, 3));
    case 2: return DriftSpec::tanh(uni(-3, 3), uni(0.1, 4));
    case 3: {
        const double lo = uni(-5, 4);
        return DriftSpec::step(uni(-3, 3), lo, lo + uni(0.1, 4));
    }
    case 4: return DriftSpec::tabulated({-2, 0, 1, 3}, {uni(-2, 2), uni(-2, 2), uni(-2, 2), uni(-2, 2)});
    case 5: {
        const double lo = uni(-3, 2);
        return DriftSpec::step(uni(-2, 2), lo, lo + uni(0.5, 3)).mollify(1 + static_cast<int>(uni(0, 16)));
    }
    default: return DriftSpec::linear(uni(-2, 2));
    }
}

} // namespace

TEST_CASE("evaluation examples")
{
    CHECK(DriftSpec::linear(1).evaluate(2.0) == 2.0);
    CHECK(DriftSpec::zero()(7.3) == 0.0);
    CHECK(DriftSpec::tanh(0.5, 1)(0.0) == 0.0);
    CHECK(DriftSpec::tanh(0.5, 2)(1.0) == doctest::Approx(0.5 * std::tanh(0.5)));
    CHECK(DriftSpec::step(2, 0, 1)(0.5) == 2.0);
    CHECK(DriftSpec::step(2, 0, 1)(1.5) == 0.0);
    const auto tab = DriftSpec::tabulated({0, 1, 2}, {0, 2, -2});
    CHECK(tab(0.5) == doctest::Approx(1.0));
    CHECK(tab(1.5) == doctest::Approx(0.0));
    CHECK(tab(-10) == 0.0);
    CHECK(tab(10) == -2.0);
    CHECK(tab.sup_norm() == 2.0);
}

TEST_CASE("norms")
{
    CHECK(DriftSpec::zero().sup_norm() == 0.0);
    CHECK(DriftSpec::constant(-1.5).sup_norm() == 1.5);
    CHECK(std::isinf(DriftSpec::linear(1).sup_norm()));
    CHECK_FALSE(DriftSpec::linear(1).bounded());
    CHECK(DriftSpec::step(2, -1, 1).l1_norm().value() == doctest::Approx(4.0));
    CHECK_FALSE(DriftSpec::constant(1).l1_norm().has_value());
}

TEST_CASE("sup-norm certification on random points for every variant")
{
    rng::Stream s(5, 0, 0);
    for (int k = 0; k < 30; ++k) {
        const DriftSpec d = random_drift(s, false);
        double worst = 0.0;
        for (int i = 0; i < 10000; ++i)
            worst = std::max(worst, std::abs(d(-100.0 + 200.0 * s.uniform())));
        CHECK_MESSAGE(worst <= d.sup_norm() * (1 + 1e-15), d.describe());
    }
}

TEST_CASE("describe and parse round trip")
{
    rng::Stream s(6, 0, 0);
    for (int k = 0; k < 200; ++k) {
        const DriftSpec d = random_drift(s, true);
        if (std::holds_alternative<drift::Tabulated>(d.kind()))
            continue;
        const DriftSpec e = parse_drift(d.describe());
        CHECK(e.describe() == d.describe());
        for (double x : {-3.3, -0.2, 0.0, 0.7, 2.9})
            CHECK(e(x) == d(x));
    }
    CHECK(parse_drift("tanh:k=0.5,lam=1").describe() == "tanh:k=0.5,lam=1");
    CHECK(parse_drift(" mollify(step:h=1,lo=-1,hi=1,n=4) ").describe() == "mollify(step:h=1,lo=-1,hi=1,n=4)");
    CHECK_THROWS_AS(parse_drift("bogus"), std::invalid_argument);
    CHECK_THROWS_AS(parse_drift("tanh:k=0.5"), std::invalid_argument);
    CHECK_THROWS_AS(parse_drift("tanh:k=0.5,lam=-1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_drift("mollify(zero,n=0)"), std::invalid_argument);
}

TEST_CASE("tables load from CSV")
{
    const std::string path = "drift_table_test.csv";
    {
        std::ofstream out(path);
        out << "knot,value\n-1,0.5\n0,1\n2,-1\n";
    }
    const DriftSpec d = parse_drift("table:" + path);
    CHECK(d(-0.5) == doctest::Approx(0.75));
    CHECK(d(5) == -1.0);
    CHECK(d.sup_norm() == 1.0);
    std::remove(path.c_str());
    CHECK_THROWS(parse_drift("table:/nonexistent/file.csv"));
}

TEST_CASE("negation")
{
    CHECK(DriftSpec::zero().negate().is_zero());
    CHECK(DriftSpec::linear(1).negate()(3.0) == -3.0);
    rng::Stream s(7, 0, 0);
    for (int k = 0; k < 50; ++k) {
        const DriftSpec d = random_drift(s, true);
        const DriftSpec nn = d.negate().negate();
        CHECK(d.negate().sup_norm() == d.sup_norm());
        for (double x : {-2.5, -0.1, 0.4, 1.9})
            CHECK(nn(x) == doctest::Approx(d(x)).epsilon(1e-15));
    }
}

TEST_CASE("bump normalisation and mollifier mass")
{
    const double mass = oracles::bump_mass();
    CHECK(1.0 / mass == doctest::Approx(drift::bump_normalization()).epsilon(1e-10));
    for (int n : {1, 2, 8, 32}) {
        const double m = oracles::simpson([&](double x) { return n * drift::bump(n * x); }, -1.0 / n, 1.0 / n, 200000);
        CHECK(std::abs(m - 1.0) < 1e-10);
    }
}

TEST_CASE("mollification")
{
    CHECK(DriftSpec::zero().mollify(5)(0.3) == 0.0);
    const auto c = DriftSpec::constant(1).mollify(3);
    for (double x : {-4.0, 0.0, 0.123, 7.0})
        CHECK(c(x) == doctest::Approx(1.0).epsilon(1e-12));
    const double v = DriftSpec::step(1, -1, 1).mollify(4)(0.0);
    CHECK(v >= 0.99);
    CHECK(v <= 1.0);
    // Near a jump: a_n(lo + s) = h * P(X < n s) for X with the bump law.
    const auto m = DriftSpec::step(1, 0, 1).mollify(4);
    const double expected = oracles::simpson([](double x) { return oracles::raw_bump(x); }, -1.0, 0.5, 200000) /
                            oracles::bump_mass();
    CHECK(m(0.125) == doctest::Approx(expected).epsilon(1e-6));
    CHECK(m.sup_norm() <= 1.0);
    CHECK(m.smooth());
}

TEST_CASE("distances")
{
    CHECK(l_inf_distance(DriftSpec::linear(1), DriftSpec::linear(1.1), {-1, 1}, 201) == doctest::Approx(0.1));
    const auto t = DriftSpec::tanh(0.5, 1);
    CHECK(l_inf_distance(t, t, {-3, 3}, 50) == 0.0);
    const double d = l_inf_distance(t, DriftSpec::zero(), {-10, 10}, 2001);
    CHECK(d >= 0.4999);
    CHECK(d <= 0.5);
    CHECK(l_inf_distance(t.scaled(1.125), t, {-20, 20}, 4001) == doctest::Approx(0.5 / 8).epsilon(1e-8));
    CHECK_THROWS_AS(l_inf_distance(t, t, {1, 1}, 10), std::invalid_argument);
    CHECK_THROWS_AS(l_inf_distance(t, t, {0, 1}, 1), std::invalid_argument);

    CHECK(l1_distance(DriftSpec::zero(), DriftSpec::zero(), {-1, 1}) == 0.0);
    const auto step = DriftSpec::step(1, 0, 1);
    CHECK(l1_distance(step, DriftSpec::zero(), {-2, 2}) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("L1 distance of a mollified step")
{
    // For n >= 2 the two jump neighbourhoods are disjoint and each contributes
    // E|X| / n, X distributed by the bump.
    const auto step = DriftSpec::step(1, 0, 1);
    const double abs_mean = oracles::bump_abs_mean();
    double previous = std::numeric_limits<double>::infinity();
    for (int n : {1, 2, 4, 8, 16}) {
        const double dist = l1_distance(step, step.mollify(n), {-2, 2});
        CHECK(dist <= previous);
        previous = dist;
        if (n >= 2)
            CHECK(dist == doctest::Approx(2.0 * abs_mean / n).epsilon(1e-4));
    }
    CHECK(previous < 0.05);
}
