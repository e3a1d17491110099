#include "velint/quadrature.hpp"

#include "velint/types.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace velint {

namespace {

// Newton on the Legendre recurrence (Golub-Welsch is overkill here).
GaussLegendreRule build_rule(int n) {
    GaussLegendreRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        rule.weights[n - 1 - i] = rule.weights[i];
    }
    return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre_rule(int n) {
    static std::mutex mu;
    static std::map<int, GaussLegendreRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
    return it->second;
}

double gauss_legendre(const std::function<double(double)>& f, double a, double b, int n) {
    const auto& rule = gauss_legendre_rule(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return acc * half;
}

double adaptive_gauss_legendre(const std::function<double(double)>& f, double a, double b,
                               double tol, int n0, int n_max, int* nodes_used) {
    if (a == b) {
        if (nodes_used) *nodes_used = 0;
        return 0.0;
    }
    int n = n0;
    double value = gauss_legendre(f, a, b, n);
    while (2 * n <= n_max) {
        n *= 2;
        const double refined = gauss_legendre(f, a, b, n);
        const bool converged = std::abs(refined - value) < tol;
        value = refined;
        if (converged) break;
    }
    if (nodes_used) *nodes_used = n;
    return value;
}

}  // namespace velint
