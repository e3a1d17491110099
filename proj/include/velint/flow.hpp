#pragma once

#include "velint/lagrangian.hpp"
#include "velint/types.hpp"

#include <vector>

namespace velint {

/// One accepted integrator step with its interpolation coefficients.
struct DenseStep {
    double t0 = 0.0;
    double h = 0.0;
    Vec r1, r2, r3, r4, r5;

    Vec eval(double t) const;
};

/// Dense output of the Euler-Lagrange flow through x0 over [t_min, t_max]
/// (the interval must contain 0; the trajectory is integrated outward from 0).
class FlowSegment {
public:
    FlowSegment() = default;

    TangentVector state(double t) const;  ///< (q(t), v(t))
    Vec position(double t) const;

    double t_min() const { return t_min_; }
    double t_max() const { return t_max_; }
    Eigen::Index dim() const { return n_; }

private:
    friend FlowSegment flow_segment(const LagrangianSystem&, const TangentVector&, double, double,
                                    double);

    Vec eval_raw(double t) const;

    Eigen::Index n_ = 0;
    double t_min_ = 0.0, t_max_ = 0.0;
    Vec y0_;                            // state at t = 0
    std::vector<DenseStep> forward_;    // steps with t0 >= 0, ascending
    std::vector<DenseStep> backward_;   // steps with t0 <= 0, descending
};

/// Integrate the Euler-Lagrange flow of sys through x0 over [t_min, t_max]
/// with local error controlled to tol, keeping dense output.
FlowSegment flow_segment(const LagrangianSystem& sys, const TangentVector& x0, double t_min,
                         double t_max, double tol);

/// F_t^{X_E}(x0), local error controlled to tol.
TangentVector reference_flow(const LagrangianSystem& sys, const TangentVector& x0, double t,
                             double tol);

}  // namespace velint
