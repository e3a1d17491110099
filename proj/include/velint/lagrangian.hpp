#pragma once

#include "velint/types.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace velint {

/// A regular Lagrangian system L : TR^n -> R with analytic first
/// derivatives and fiber Hessian. d2Ldqdv(i,j) = d^2 L / dv_i dq_j,
/// i.e. the q-Jacobian of the fiber derivative dLdv.
struct LagrangianSystem {
    Eigen::Index dim = 1;
    std::function<double(const Vec& q, const Vec& v)> L;
    std::function<Vec(const Vec& q, const Vec& v)> dLdq;
    std::function<Vec(const Vec& q, const Vec& v)> dLdv;
    std::function<Mat(const Vec& q, const Vec& v)> d2Ldv2;
    std::function<Mat(const Vec& q, const Vec& v)> d2Ldqdv;
    bool fd_hessian = false;  ///< Hessians approximated by central differences
};

using SystemPtr = std::shared_ptr<const LagrangianSystem>;

/// Mechanical data L = 1/2 v^T M(q) v - V(q). dM(q)[k] = dM/dq_k.
struct MechanicalSystem {
    Eigen::Index dim = 1;
    std::function<Mat(const Vec& q)> M;
    std::function<std::vector<Mat>(const Vec& q)> dM;
    std::function<double(const Vec& q)> V;
    std::function<Vec(const Vec& q)> dV;
};

SystemPtr make_lagrangian(const MechanicalSystem& mech);

/// 1-D mechanical system from scalar callbacks g(q) > 0 and V(q).
SystemPtr mechanical_1d(std::function<double(double)> g, std::function<double(double)> dg,
                        std::function<double(double)> V, std::function<double(double)> dV);

/// General Lagrangian from L and first derivatives; Hessians by central
/// differences (flagged via fd_hessian).
SystemPtr make_lagrangian_fd(Eigen::Index dim, std::function<double(const Vec&, const Vec&)> L,
                             std::function<Vec(const Vec&, const Vec&)> dLdq,
                             std::function<Vec(const Vec&, const Vec&)> dLdv);

// Built-in families.
SystemPtr harmonic_oscillator();          // g = 1, V = q^2/2
SystemPtr pendulum();                     // g = 1, V = -cos q
SystemPtr free_particle();                // g = 1, V = 0
SystemPtr curved_oscillator();            // g = 1 + q^2, V = q^2/2 (second test system)

double eval_lagrangian(const LagrangianSystem& sys, const TangentVector& x);

/// Acceleration a solving F^2L a = dLdq - d2Ldqdv v.
Vec euler_lagrange_accel(const LagrangianSystem& sys, const TangentVector& x);

/// Fiber derivative FL(v_q) = dLdv(q, v).
Vec fiber_legendre(const LagrangianSystem& sys, const TangentVector& x);

/// E(q,v) = dLdv . v - L.
double energy(const LagrangianSystem& sys, const TangentVector& x);

/// Solve F^2L(q,v) x = rhs with a condition-number guard (1e12).
Vec solve_fiber_hessian(const LagrangianSystem& sys, const TangentVector& x, const Vec& rhs);

/// Max relative mismatch between supplied derivatives and central
/// differences of L over the given states.
double derivative_consistency(const LagrangianSystem& sys, const std::vector<TangentVector>& states);

}  // namespace velint
