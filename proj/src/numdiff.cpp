#include "velint/numdiff.hpp"

namespace velint {

Vec central_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double step) {
    Vec g(x.size());
    Vec xp = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        xp[i] = xi + step;
        const double fp = f(xp);
        xp[i] = xi - step;
        const double fm = f(xp);
        xp[i] = xi;
        g[i] = (fp - fm) / (2.0 * step);
    }
    return g;
}

Mat central_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double step) {
    Mat J;
    Vec xp = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        xp[i] = xi + step;
        const Vec fp = f(xp);
        xp[i] = xi - step;
        const Vec fm = f(xp);
        xp[i] = xi;
        if (J.size() == 0) J.resize(fp.size(), x.size());
        J.col(i) = (fp - fm) / (2.0 * step);
    }
    return J;
}

double central_derivative(const std::function<double(double)>& f, double t, double step) {
    return (f(t + step) - f(t - step)) / (2.0 * step);
}

}  // namespace velint
