#pragma once

#include "velint/discrete_lagrangian.hpp"
#include "velint/discretization.hpp"
#include "velint/types.hpp"

#include <functional>
#include <vector>

namespace velint {

struct NewtonSettings {
    double tol = 1e-11;    ///< stopping norm for the momentum-balance residual
    int max_iter = 50;
    double damping = 0.5;  ///< backtracking factor
};

/// A critical triple (h, v, v~): one step of the discrete evolution.
struct CriticalTriple {
    double h = 0.0;
    TangentVector v;
    TangentVector v_tilde;
    double residual_norm = 0.0;
};

/// Solution of the desingularized variational principle at fixed (h, q_bar, z).
struct BlownUpSolution {
    double h = 0.0;
    Vec q_bar;
    Vec z;
    TangentVector v;
    TangentVector v_tilde;
    Mat second_variation;  ///< Hessian of the blown-up objective at the solution
    double residual_norm = 0.0;
};

/// F^- L_h(q2, q1) - F^+ L_h(q1, q0); zero iff (q0, q1, q2) is critical.
Vec del_residual(const DiscreteLagrangianQQ& dl, double h, const Vec& q0, const Vec& q1,
                 const Vec& q2);

/// Advance the Q x Q discrete evolution: solve the DEL for q2 given (q1, q0).
Vec qq_step(const DiscreteLagrangianQQ& dl, double h, const Vec& q1, const Vec& q0,
            const NewtonSettings& s = {});

/// One step of the discrete evolution F(h, v) on TQ, solved in Q x Q
/// coordinates and mapped back through Psi_h^{-1}.
CriticalTriple step(const DiscreteLagrangianTQ& dl, const TangentDiscretization& d, double h,
                    const TangentVector& v, const NewtonSettings& s = {});

/// Iterate step; adjacent triples share their joining boundary point.
std::vector<CriticalTriple> trajectory(const DiscreteLagrangianTQ& dl,
                                       const TangentDiscretization& d, double h,
                                       const TangentVector& v0, int nsteps,
                                       const NewtonSettings& s = {});

/// Critical point of the desingularized principle with constraint data
/// (q_bar, z). At h = 0 this is the blown-up principle with solution
/// v = v~ = z; for h > 0 it is the fixed-endpoint DEL with endpoints
/// q_bar -+ h z.
BlownUpSolution step_blownup(const DiscreteLagrangianTQ& dl, const TangentDiscretization& d,
                             const LagrangianSystem& sys, double h, const Vec& q_bar, const Vec& z,
                             const NewtonSettings& s = {});

namespace detail {

struct NewtonResult {
    Vec root;
    double residual_norm = 0.0;
};

/// Damped Newton with central-difference Jacobian on the residual map.
NewtonResult newton_root(const std::function<Vec(const Vec&)>& residual, const Vec& seed,
                         const NewtonSettings& s, const char* what);

/// DEL step with different discrete Lagrangians on the two sides
/// (F^+ from `plus_side`, F^- from `minus_side`). Exists only for the
/// a-term study; deliberately not part of the stepping API.
Vec qq_step_mismatched(const DiscreteLagrangianQQ& plus_side,
                       const DiscreteLagrangianQQ& minus_side, double h, const Vec& q1,
                       const Vec& q0, const NewtonSettings& s);

}  // namespace detail

}  // namespace velint
