#pragma once

#include "velint/types.hpp"

#include <functional>

namespace velint {

/// Central-difference gradient of a scalar function of a vector.
Vec central_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double step);

/// Central-difference Jacobian of a vector function of a vector.
Mat central_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double step);

/// Central difference of a scalar function of one real variable.
double central_derivative(const std::function<double(double)>& f, double t, double step);

/// Per-coordinate step scaled to the magnitude of x.
inline double fd_step(double base, const Vec& x) { return base * (1.0 + x.cwiseAbs().maxCoeff()); }

}  // namespace velint
