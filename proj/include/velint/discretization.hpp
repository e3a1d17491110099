#pragma once

#include "velint/flow.hpp"
#include "velint/lagrangian.hpp"
#include "velint/types.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace velint {

/// Linear endpoint schedule alpha^+(h) = (1-beta) h, alpha^-(h) = -beta h,
/// beta in [0,1]. Covers the common segment windows [0,h] and [-h/2,h/2].
struct EndpointSchedule {
    double beta = 0.0;

    double alpha_plus(double h) const { return (1.0 - beta) * h; }
    double alpha_minus(double h) const { return -beta * h; }
    double alpha_dot_plus() const { return 1.0 - beta; }
    double alpha_dot_minus() const { return -beta; }
};

enum class SegmentKind { Linear, Exact, Custom };

using PsiFn = std::function<Vec(double h, double t, const TangentVector& x)>;

/// A discretization of TR^n: curve segments psi(h, t, v_q) with the
/// endpoint schedule above. Linear segments are straight lines through
/// the base point; exact segments follow the Euler-Lagrange flow.
class TangentDiscretization {
public:
    static TangentDiscretization linear(double beta);
    static TangentDiscretization exact(SystemPtr sys, double flow_tol, double beta);
    static TangentDiscretization custom(PsiFn psi, EndpointSchedule schedule);

    SegmentKind kind() const { return kind_; }
    const EndpointSchedule& schedule() const { return schedule_; }
    double flow_tol() const { return flow_tol_; }
    const SystemPtr& system() const { return sys_; }

    Vec psi(double h, double t, const TangentVector& x) const;

    /// Dense flow over the segment window (Exact kind only); t_extra pads
    /// the window on both sides.
    FlowSegment segment(double h, const TangentVector& x, double t_extra = 0.0) const;

private:
    TangentDiscretization() = default;

    SegmentKind kind_ = SegmentKind::Linear;
    EndpointSchedule schedule_;
    double flow_tol_ = 1e-10;
    SystemPtr sys_;
    PsiFn psi_;
};

struct BoundaryPair {
    Vec q_minus;
    Vec q_plus;
};

Vec boundary_minus(const TangentDiscretization& d, double h, const TangentVector& x);
Vec boundary_plus(const TangentDiscretization& d, double h, const TangentVector& x);

/// Psi_h(v) = (boundary_plus, boundary_minus) evaluated together.
BoundaryPair psi_map(const TangentDiscretization& d, double h, const TangentVector& x);

/// Psi_h^{-1}: the tangent vector whose segment endpoints are the given
/// pair. Closed form for linear segments, shooting for exact ones.
TangentVector psi_inverse(const TangentDiscretization& d, double h, const Vec& q_plus,
                          const Vec& q_minus);

/// Initial velocity state whose exact segment runs from q_minus to q_plus
/// (the Delta_h map), found by Newton shooting on the flow.
TangentVector shooting_delta(const TangentDiscretization& d, const LagrangianSystem& sys, double h,
                             const BoundaryPair& pair);

struct AxiomCheck {
    std::string axiom;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct ValidationReport {
    std::vector<AxiomCheck> checks;
    bool all_pass() const;
};

/// Numerically checks the discretization axioms (schedule sum, base point,
/// initial velocity, boundary rate at h = 0) on the given (h, state) samples.
ValidationReport validate_discretization(const TangentDiscretization& d,
                                         const LagrangianSystem& sys,
                                         const std::vector<std::pair<double, TangentVector>>& samples);

}  // namespace velint
