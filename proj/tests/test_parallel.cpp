#include "arratia/parallel.hpp"
#include "arratia/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>

using namespace arratia;

namespace {

double term(std::size_t i)
{
    rng::Stream s(99, 0, i);
    return std::exp(s.normal()) * 1e-3 + 1e8 * (i % 3 == 0);
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

} // namespace

TEST_CASE("reduction result does not depend on the number of workers")
{
    for (std::size_t n : {1UL, 5UL, 1023UL, 1024UL, 1025UL, 50000UL}) {
        const double serial = parallel::reduce<double>(n, term, parallel::Exec::serial);
        for (int threads : {1, 4, 16}) {
            parallel::set_threads(threads);
            const double par = parallel::reduce<double>(n, term, parallel::Exec::parallel);
            CHECK(same_bits(serial, par));
        }
    }
    parallel::set_threads(1);
}

TEST_CASE("pairwise sum and moments")
{
    std::vector<double> v{1, 2, 3, 4, 5};
    CHECK(parallel::pairwise_sum(v, 0, v.size()) == 15.0);
    auto m = parallel::Moments::of(1.0) + parallel::Moments::of(3.0);
    CHECK(m.mean() == 2.0);
    // sample sd sqrt(2), stderr sqrt(2)/sqrt(2) = 1
    CHECK(m.stderr_mean() == doctest::Approx(1.0));
    CHECK(parallel::reduce<double>(0, term) == 0.0);
}
