#include "velint/discretization.hpp"

#include "velint/numdiff.hpp"

#include <algorithm>
#include <cmath>

namespace velint {

TangentDiscretization TangentDiscretization::linear(double beta) {
    if (beta < 0.0 || beta > 1.0) throw Error("linear discretization: beta must lie in [0,1]");
    TangentDiscretization d;
    d.kind_ = SegmentKind::Linear;
    d.schedule_.beta = beta;
    return d;
}

TangentDiscretization TangentDiscretization::exact(SystemPtr sys, double flow_tol, double beta) {
    if (!sys) throw Error("exact discretization: system required");
    if (!(flow_tol > 0.0)) throw Error("exact discretization: flow tolerance must be positive");
    if (beta < 0.0 || beta > 1.0) throw Error("exact discretization: beta must lie in [0,1]");
    TangentDiscretization d;
    d.kind_ = SegmentKind::Exact;
    d.schedule_.beta = beta;
    d.flow_tol_ = flow_tol;
    d.sys_ = std::move(sys);
    return d;
}

TangentDiscretization TangentDiscretization::custom(PsiFn psi, EndpointSchedule schedule) {
    TangentDiscretization d;
    d.kind_ = SegmentKind::Custom;
    d.schedule_ = schedule;
    d.psi_ = std::move(psi);
    return d;
}

Vec TangentDiscretization::psi(double h, double t, const TangentVector& x) const {
    switch (kind_) {
        case SegmentKind::Linear:
            return x.q + t * x.v;
        case SegmentKind::Exact:
            return reference_flow(*sys_, x, t, flow_tol_).q;
        case SegmentKind::Custom:
            return psi_(h, t, x);
    }
    throw Error("unreachable");
}

FlowSegment TangentDiscretization::segment(double h, const TangentVector& x, double t_extra) const {
    if (kind_ != SegmentKind::Exact) throw Error("segment(): exact discretizations only");
    const double lo = std::min(schedule_.alpha_minus(h), 0.0) - t_extra;
    const double hi = std::max(schedule_.alpha_plus(h), 0.0) + t_extra;
    return flow_segment(*sys_, x, lo, hi, flow_tol_);
}

Vec boundary_minus(const TangentDiscretization& d, double h, const TangentVector& x) {
    if (h < 0.0) throw Error("boundary_minus: h must be nonnegative");
    if (h == 0.0) return x.q;
    return d.psi(h, d.schedule().alpha_minus(h), x);
}

Vec boundary_plus(const TangentDiscretization& d, double h, const TangentVector& x) {
    if (h < 0.0) throw Error("boundary_plus: h must be nonnegative");
    if (h == 0.0) return x.q;
    return d.psi(h, d.schedule().alpha_plus(h), x);
}

BoundaryPair psi_map(const TangentDiscretization& d, double h, const TangentVector& x) {
    if (h < 0.0) throw Error("psi_map: h must be nonnegative");
    if (h == 0.0) return {x.q, x.q};
    if (d.kind() == SegmentKind::Exact) {
        const FlowSegment seg = d.segment(h, x);
        return {seg.position(d.schedule().alpha_minus(h)), seg.position(d.schedule().alpha_plus(h))};
    }
    return {boundary_minus(d, h, x), boundary_plus(d, h, x)};
}

TangentVector psi_inverse(const TangentDiscretization& d, double h, const Vec& q_plus,
                          const Vec& q_minus) {
    if (!(h > 0.0)) throw Error("psi_inverse: h must be positive");
    switch (d.kind()) {
        case SegmentKind::Linear: {
            Vec v = (q_plus - q_minus) / h;
            Vec q = q_minus + d.schedule().beta * (q_plus - q_minus);
            return TangentVector{std::move(q), std::move(v)};
        }
        case SegmentKind::Exact:
            return shooting_delta(d, *d.system(), h, BoundaryPair{q_minus, q_plus});
        case SegmentKind::Custom:
            throw Error("psi_inverse: not available for custom segment maps");
    }
    throw Error("unreachable");
}

TangentVector shooting_delta(const TangentDiscretization& d, const LagrangianSystem& sys, double h,
                             const BoundaryPair& pair) {
    if (!(h > 0.0)) throw Error("shooting_delta: h must be positive");
    if (d.kind() != SegmentKind::Exact) throw Error("shooting_delta: exact discretizations only");
    const Eigen::Index n = sys.dim;
    if (pair.q_plus.size() != n || pair.q_minus.size() != n)
        throw DimensionError("shooting_delta: boundary pair dimension mismatch");

    const EndpointSchedule& sched = d.schedule();
    const double am = sched.alpha_minus(h), ap = sched.alpha_plus(h);

    const auto residual = [&](const Vec& u) {
        const TangentVector x{u.head(n), u.tail(n)};
        const FlowSegment seg = flow_segment(sys, x, std::min(am, 0.0), std::max(ap, 0.0),
                                             d.flow_tol());
        Vec r(2 * n);
        r.head(n) = seg.position(am) - pair.q_minus;
        r.tail(n) = seg.position(ap) - pair.q_plus;
        return r;
    };

    Vec u(2 * n);
    u.tail(n) = (pair.q_plus - pair.q_minus) / h;
    u.head(n) = pair.q_minus + sched.beta * (pair.q_plus - pair.q_minus);

    const double scale = 1.0 + std::max(pair.q_plus.cwiseAbs().maxCoeff(),
                                        pair.q_minus.cwiseAbs().maxCoeff());
    const double tol = std::max(1e-12, 0.01 * d.flow_tol()) * scale;

    Vec r = residual(u);
    for (int iter = 0; iter < 60; ++iter) {
        if (r.cwiseAbs().maxCoeff() <= tol) {
            return TangentVector{u.head(n), u.tail(n)};
        }
        const Mat J = central_jacobian(residual, u, fd_step(1e-7, u));
        Eigen::FullPivLU<Mat> lu(J);
        if (!lu.isInvertible()) throw ConvergenceError("shooting_delta: singular shooting Jacobian");
        const Vec du = lu.solve(-r);

        double lambda = 1.0;
        const double r0 = r.norm();
        for (int back = 0; back < 30; ++back) {
            const Vec trial = u + lambda * du;
            const Vec rt = residual(trial);
            if (rt.norm() < r0 || rt.cwiseAbs().maxCoeff() <= tol) {
                u = trial;
                r = rt;
                break;
            }
            lambda *= 0.5;
            if (back == 29) throw ConvergenceError("shooting_delta: line search failed");
        }
    }
    throw ConvergenceError("shooting_delta: no convergence (endpoints too far apart?)");
}

bool ValidationReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.pass; });
}

ValidationReport validate_discretization(
    const TangentDiscretization& d, const LagrangianSystem& sys,
    const std::vector<std::pair<double, TangentVector>>& samples) {
    ValidationReport report;
    const EndpointSchedule& sched = d.schedule();
    const bool exact = d.kind() == SegmentKind::Exact;
    const double tol_points = exact ? 10.0 * d.flow_tol() : 1e-8;

    double r_sum = 0.0, r_base = 0.0, r_vel = 0.0, r_rate = 0.0;
    for (const auto& [h, x] : samples) {
        require_dim(x, sys.dim, "validate_discretization");
        r_sum = std::max(r_sum, std::abs(sched.alpha_plus(h) - sched.alpha_minus(h) - h));

        const double dt = std::cbrt(std::numeric_limits<double>::epsilon()) *
                          (1.0 + x.v.cwiseAbs().maxCoeff());
        const double dh = 1e-5 * (1.0 + x.v.cwiseAbs().maxCoeff());

        if (exact) {
            // One dense trajectory per sample keeps all probes smooth; every
            // query below lives within |t| <= 2dh + 2dt.
            const double pad = 2.0 * dh + 2.0 * dt;
            const FlowSegment seg = flow_segment(sys, x, -pad, pad, d.flow_tol());
            r_base = std::max(r_base, (seg.position(0.0) - x.q).cwiseAbs().maxCoeff());
            const Vec vel = (seg.position(dt) - seg.position(-dt)) / (2.0 * dt);
            r_vel = std::max(r_vel, (vel - x.v).cwiseAbs().maxCoeff());

            const auto bd_rate = [&](auto alpha, double adot) {
                const Vec f0 = seg.position(alpha(0.0));
                const Vec f1 = seg.position(alpha(dh));
                const Vec f2 = seg.position(alpha(2.0 * dh));
                const Vec rate = (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * dh);
                return (rate - adot * x.v).cwiseAbs().maxCoeff();
            };
            r_rate = std::max(r_rate, bd_rate([&](double hh) { return sched.alpha_plus(hh); },
                                              sched.alpha_dot_plus()));
            r_rate = std::max(r_rate, bd_rate([&](double hh) { return sched.alpha_minus(hh); },
                                              sched.alpha_dot_minus()));
        } else {
            r_base = std::max(r_base, (d.psi(h, 0.0, x) - x.q).cwiseAbs().maxCoeff());
            const Vec vel = (d.psi(h, dt, x) - d.psi(h, -dt, x)) / (2.0 * dt);
            r_vel = std::max(r_vel, (vel - x.v).cwiseAbs().maxCoeff());

            const auto bd_rate = [&](auto alpha, double adot) {
                const Vec f0 = d.psi(0.0, alpha(0.0), x);
                const Vec f1 = d.psi(dh, alpha(dh), x);
                const Vec f2 = d.psi(2.0 * dh, alpha(2.0 * dh), x);
                const Vec rate = (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * dh);
                return (rate - adot * x.v).cwiseAbs().maxCoeff();
            };
            r_rate = std::max(r_rate, bd_rate([&](double hh) { return sched.alpha_plus(hh); },
                                              sched.alpha_dot_plus()));
            r_rate = std::max(r_rate, bd_rate([&](double hh) { return sched.alpha_minus(hh); },
                                              sched.alpha_dot_minus()));
        }
    }

    report.checks.push_back({"schedule-sum", r_sum, 1e-12, r_sum <= 1e-12});
    report.checks.push_back({"psi-base-point", r_base, tol_points, r_base <= tol_points});
    const double tol_fd = std::max(tol_points, 1e-7);
    report.checks.push_back({"psi-initial-velocity", r_vel, tol_fd, r_vel <= tol_fd});
    const double tol_rate = std::max(tol_points, 1e-4);
    report.checks.push_back({"boundary-rate-at-zero", r_rate, tol_rate, r_rate <= tol_rate});
    return report;
}

}  // namespace velint
