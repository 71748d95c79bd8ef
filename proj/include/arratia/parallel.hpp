#pragma once

#include <cstddef>
#include <vector>

namespace arratia::parallel {

enum class Exec { serial, parallel };

void set_threads(int n);
int threads();

/// Chunk size of the deterministic reductions. Fixed, so the summation
/// tree never depends on the number of workers.
inline constexpr std::size_t kChunk = 1024;

/// Pairwise (tree) combination of partials in index order.
template <class T>
T pairwise_sum(const std::vector<T>& parts, std::size_t lo, std::size_t hi)
{
    if (hi - lo == 1)
        return parts[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(parts, lo, mid) + pairwise_sum(parts, mid, hi);
}

/// Sum of f(i) for i in [0, n) with a reduction order that depends only on n:
/// items are folded left-to-right inside fixed-size chunks, chunk partials
/// are combined pairwise. T needs a value-initialised zero and operator+.
template <class T, class F>
T reduce(std::size_t n, F&& f, Exec exec = Exec::parallel)
{
    if (n == 0)
        return T{};
    const std::size_t chunks = (n + kChunk - 1) / kChunk;
    std::vector<T> parts(chunks);
    auto run_chunk = [&](std::size_t c) {
        const std::size_t lo = c * kChunk;
        const std::size_t hi = lo + kChunk < n ? lo + kChunk : n;
        T acc{};
        for (std::size_t i = lo; i < hi; ++i)
            acc = acc + f(i);
        parts[c] = acc;
    };
    if (exec == Exec::parallel) {
        const long long nc = static_cast<long long>(chunks);
#pragma omp parallel for schedule(dynamic, 1)
        for (long long c = 0; c < nc; ++c)
            run_chunk(static_cast<std::size_t>(c));
    } else {
        for (std::size_t c = 0; c < chunks; ++c)
            run_chunk(c);
    }
    return pairwise_sum(parts, 0, chunks);
}

/// First and second moments of a weighted sample.
struct Moments {
    double sum = 0.0;
    double sum_sq = 0.0;
    double count = 0.0;

    static Moments of(double w) { return {w, w * w, 1.0}; }

    friend Moments operator+(const Moments& a, const Moments& b)
    {
        return {a.sum + b.sum, a.sum_sq + b.sum_sq, a.count + b.count};
    }

    double mean() const { return count > 0 ? sum / count : 0.0; }
    /// Standard error of the mean.
    double stderr_mean() const;
};

} // namespace arratia::parallel
