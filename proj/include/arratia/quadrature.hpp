#pragma once

#include <functional>
#include <vector>

namespace arratia::quad {

/// Gauss-Legendre rule on [-1, 1] with all nodes expanded.
struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::size_t size() const { return nodes.size(); }
};

/// Supported orders: 8, 12, 16, 24, 32, 48, 64, 96, 128. Rules are built
/// once and shared.
const Rule& gauss_legendre(int points);

template <class F>
double integrate(const Rule& rule, F&& f, double a, double b)
{
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i)
        acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return acc * half;
}

/// Adaptive Gauss-Kronrod (61 points) with absolute tolerance.
double adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol,
                double* error_estimate = nullptr);

} // namespace arratia::quad
