#pragma once

#include <functional>
#include <vector>

namespace velint {

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Cached rule (thread-safe construction, immutable afterwards).
const GaussLegendreRule& gauss_legendre_rule(int n);

/// n-point Gauss-Legendre approximation of the integral of f over [a, b].
double gauss_legendre(const std::function<double(double)>& f, double a, double b, int n);

/// Gauss-Legendre with node doubling from n0 until successive values
/// differ by less than tol (absolute). Returns the last value.
double adaptive_gauss_legendre(const std::function<double(double)>& f, double a, double b,
                               double tol, int n0 = 8, int n_max = 512, int* nodes_used = nullptr);

}  // namespace velint
