#include "velint/discrete_lagrangian.hpp"

#include "velint/numdiff.hpp"
#include "velint/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace velint {

namespace {

constexpr double kGradStep = 1e-6;  // FD step for quadrature-defined families

double action_along_flow(const LagrangianSystem& sys, const EndpointSchedule& sched, double h,
                         const TangentVector& x, double tol) {
    const double am = sched.alpha_minus(h), ap = sched.alpha_plus(h);
    const FlowSegment seg = flow_segment(sys, x, std::min(am, 0.0), std::max(ap, 0.0), tol);
    const auto integrand = [&](double t) {
        const TangentVector s = seg.state(t);
        return sys.L(s.q, s.v);
    };
    return adaptive_gauss_legendre(integrand, am, ap, tol, 8, 512);
}

}  // namespace

std::string family_name(Family f) {
    switch (f) {
        case Family::LeftRectangle: return "left_rectangle";
        case Family::Midpoint: return "midpoint";
        case Family::Trapezoid: return "trapezoid";
        case Family::Exact: return "exact";
        case Family::UserDefined: return "user_defined";
    }
    return "?";
}

DiscreteLagrangianTQ make_family(SystemPtr sys, const TangentDiscretization& d, Family family,
                                 FamilyParams params) {
    if (!sys) throw Error("make_family: system required");
    if (family == Family::Exact && !(params.tol > 0.0))
        throw Error("make_family: exact family needs a positive tolerance");
    if (family == Family::UserDefined)
        throw Error("make_family: use make_user_family for user-defined families");
    if ((family == Family::Midpoint || family == Family::Trapezoid) &&
        d.kind() == SegmentKind::Custom)
        throw Error("make_family: midpoint/trapezoid need linear or exact segments");

    DiscreteLagrangianTQ dl;
    dl.family_ = family;
    dl.a_ = params.a;
    dl.quad_tol_ = params.tol;
    dl.sys_ = std::move(sys);
    dl.disc_ = d;
    switch (family) {
        case Family::LeftRectangle: dl.claimed_contact_order_ = 1; break;
        case Family::Midpoint:
        case Family::Trapezoid: dl.claimed_contact_order_ = 2; break;
        case Family::Exact: dl.claimed_contact_order_ = std::numeric_limits<int>::max(); break;
        default: break;
    }
    return dl;
}

DiscreteLagrangianTQ make_user_family(SystemPtr sys, const TangentDiscretization& d,
                                      DiscreteLagrangianTQ::EvalFn eval, int claimed_order,
                                      DiscreteLagrangianTQ::GradFn grad_q,
                                      DiscreteLagrangianTQ::GradFn grad_v) {
    if (!sys || !eval) throw Error("make_user_family: system and eval required");
    DiscreteLagrangianTQ dl;
    dl.family_ = Family::UserDefined;
    dl.claimed_contact_order_ = claimed_order;
    dl.sys_ = std::move(sys);
    dl.disc_ = d;
    dl.eval_fn_ = std::move(eval);
    dl.grad_q_fn_ = std::move(grad_q);
    dl.grad_v_fn_ = std::move(grad_v);
    return dl;
}

double DiscreteLagrangianTQ::eval(double h, const TangentVector& x) const {
    require_dim(x, sys_->dim, "DiscreteLagrangianTQ::eval");
    if (h < 0.0) throw Error("discrete Lagrangian: h must be nonnegative");
    if (h == 0.0) return 0.0;  // L_0 == 0

    const EndpointSchedule& sched = disc_.schedule();
    switch (family_) {
        case Family::LeftRectangle:
            return h * sys_->L(x.q, x.v) + a_ * h * h * x.v.sum();
        case Family::Midpoint: {
            const double t_mid = 0.5 * (sched.alpha_plus(h) + sched.alpha_minus(h));
            if (disc_.kind() == SegmentKind::Exact) {
                const TangentVector s = reference_flow(*sys_, x, t_mid, disc_.flow_tol());
                return h * sys_->L(s.q, s.v);
            }
            return h * sys_->L(x.q + t_mid * x.v, x.v);
        }
        case Family::Trapezoid: {
            const double am = sched.alpha_minus(h), ap = sched.alpha_plus(h);
            if (disc_.kind() == SegmentKind::Exact) {
                const FlowSegment seg = disc_.segment(h, x);
                const TangentVector sm = seg.state(am), sp = seg.state(ap);
                return 0.5 * h * (sys_->L(sm.q, sm.v) + sys_->L(sp.q, sp.v));
            }
            return 0.5 * h * (sys_->L(x.q + am * x.v, x.v) + sys_->L(x.q + ap * x.v, x.v));
        }
        case Family::Exact:
            return action_along_flow(*sys_, sched, h, x, quad_tol_);
        case Family::UserDefined:
            return eval_fn_(h, x);
    }
    throw Error("unreachable");
}

Vec DiscreteLagrangianTQ::grad_q(double h, const TangentVector& x) const {
    if (h == 0.0) return Vec::Zero(sys_->dim);
    const EndpointSchedule& sched = disc_.schedule();
    const bool linear = disc_.kind() == SegmentKind::Linear;
    switch (family_) {
        case Family::LeftRectangle:
            return h * sys_->dLdq(x.q, x.v);
        case Family::Midpoint:
            if (linear) {
                const double t_mid = 0.5 * (sched.alpha_plus(h) + sched.alpha_minus(h));
                return h * sys_->dLdq(x.q + t_mid * x.v, x.v);
            }
            break;
        case Family::Trapezoid:
            if (linear) {
                const double am = sched.alpha_minus(h), ap = sched.alpha_plus(h);
                return 0.5 * h *
                       (sys_->dLdq(x.q + am * x.v, x.v) + sys_->dLdq(x.q + ap * x.v, x.v));
            }
            break;
        case Family::Exact:
            break;
        case Family::UserDefined:
            if (grad_q_fn_) return grad_q_fn_(h, x);
            break;
    }
    const double step = fd_step(kGradStep, x.q);
    return central_gradient(
        [&](const Vec& q) { return eval(h, TangentVector{q, x.v}); }, x.q, step);
}

Vec DiscreteLagrangianTQ::grad_v(double h, const TangentVector& x) const {
    if (h == 0.0) return Vec::Zero(sys_->dim);
    const EndpointSchedule& sched = disc_.schedule();
    const bool linear = disc_.kind() == SegmentKind::Linear;
    switch (family_) {
        case Family::LeftRectangle:
            return Vec(h * sys_->dLdv(x.q, x.v) + a_ * h * h * Vec::Ones(x.v.size()));
        case Family::Midpoint:
            if (linear) {
                const double t_mid = 0.5 * (sched.alpha_plus(h) + sched.alpha_minus(h));
                const Vec qm = x.q + t_mid * x.v;
                return Vec(h * (t_mid * sys_->dLdq(qm, x.v) + sys_->dLdv(qm, x.v)));
            }
            break;
        case Family::Trapezoid:
            if (linear) {
                const double am = sched.alpha_minus(h), ap = sched.alpha_plus(h);
                const Vec qm = x.q + am * x.v, qp = x.q + ap * x.v;
                return Vec(0.5 * h *
                           (am * sys_->dLdq(qm, x.v) + sys_->dLdv(qm, x.v) +
                            ap * sys_->dLdq(qp, x.v) + sys_->dLdv(qp, x.v)));
            }
            break;
        case Family::Exact:
            break;
        case Family::UserDefined:
            if (grad_v_fn_) return grad_v_fn_(h, x);
            break;
    }
    const double step = fd_step(kGradStep, x.v);
    return central_gradient(
        [&](const Vec& v) { return eval(h, TangentVector{x.q, v}); }, x.v, step);
}

DiscreteLagrangianQQ to_qq(const DiscreteLagrangianTQ& dl, const TangentDiscretization& d) {
    DiscreteLagrangianQQ qq;
    qq.dim = dl.system()->dim;

    if (d.kind() == SegmentKind::Linear) {
        const double beta = d.schedule().beta;
        qq.eval = [dl, d](double h, const Vec& qp, const Vec& qm) {
            return dl.eval(h, psi_inverse(d, h, qp, qm));
        };
        qq.d_plus = [dl, d, beta](double h, const Vec& qp, const Vec& qm) {
            const TangentVector x = psi_inverse(d, h, qp, qm);
            return Vec(beta * dl.grad_q(h, x) + dl.grad_v(h, x) / h);
        };
        qq.d_minus = [dl, d, beta](double h, const Vec& qp, const Vec& qm) {
            const TangentVector x = psi_inverse(d, h, qp, qm);
            return Vec((1.0 - beta) * dl.grad_q(h, x) - dl.grad_v(h, x) / h);
        };
        return qq;
    }

    if (d.kind() != SegmentKind::Exact)
        throw Error("to_qq: custom segment maps have no invertible Psi");

    if (dl.family() == Family::Exact) {
        // Generating-function route: the partial derivatives of the exact
        // action are the continuous fiber derivatives at the segment ends.
        const SystemPtr sys = dl.system();
        qq.eval = [dl, d](double h, const Vec& qp, const Vec& qm) {
            return dl.eval(h, psi_inverse(d, h, qp, qm));
        };
        qq.d_plus = [d, sys](double h, const Vec& qp, const Vec& qm) {
            const TangentVector x = psi_inverse(d, h, qp, qm);
            const TangentVector end = d.segment(h, x).state(d.schedule().alpha_plus(h));
            return sys->dLdv(end.q, end.v);
        };
        qq.d_minus = [d, sys](double h, const Vec& qp, const Vec& qm) {
            const TangentVector x = psi_inverse(d, h, qp, qm);
            const TangentVector start = d.segment(h, x).state(d.schedule().alpha_minus(h));
            return Vec(-sys->dLdv(start.q, start.v));
        };
        return qq;
    }

    qq.eval = [dl, d](double h, const Vec& qp, const Vec& qm) {
        return dl.eval(h, psi_inverse(d, h, qp, qm));
    };
    return make_qq(qq.dim, qq.eval);  // derivatives by shooting + FD
}

DiscreteLagrangianQQ make_qq(Eigen::Index dim,
                             std::function<double(double, const Vec&, const Vec&)> eval,
                             std::function<Vec(double, const Vec&, const Vec&)> d_plus,
                             std::function<Vec(double, const Vec&, const Vec&)> d_minus) {
    if (!eval) throw Error("make_qq: eval required");
    DiscreteLagrangianQQ qq;
    qq.dim = dim;
    qq.eval = eval;
    qq.d_plus = d_plus ? std::move(d_plus)
                       : [eval](double h, const Vec& qp, const Vec& qm) {
                             return central_gradient(
                                 [&](const Vec& q) { return eval(h, q, qm); }, qp,
                                 fd_step(kGradStep, qp));
                         };
    qq.d_minus = d_minus ? std::move(d_minus)
                         : [eval](double h, const Vec& qp, const Vec& qm) {
                               return central_gradient(
                                   [&](const Vec& q) { return eval(h, qp, q); }, qm,
                                   fd_step(kGradStep, qm));
                           };
    return qq;
}

LegendrePair legendre(const DiscreteLagrangianQQ& dl, double h, const Vec& q_plus,
                      const Vec& q_minus) {
    if (!(h > 0.0)) throw Error("legendre: h must be positive");
    return LegendrePair{dl.d_plus(h, q_plus, q_minus), Vec(-dl.d_minus(h, q_plus, q_minus))};
}

ContactReport contact_order_estimate(const DiscreteLagrangianTQ& dl1,
                                     const DiscreteLagrangianTQ& dl2,
                                     const std::vector<TangentVector>& states,
                                     const std::vector<double>& h_grid) {
    if (states.empty()) throw Error("contact_order_estimate: need at least one state");
    ContactReport out;
    std::vector<double> diffs(h_grid.size(), 0.0);
    double scale = 0.0;
    for (std::size_t i = 0; i < h_grid.size(); ++i) {
        for (const auto& x : states) {
            const double v1 = dl1.eval(h_grid[i], x);
            const double v2 = dl2.eval(h_grid[i], x);
            diffs[i] = std::max(diffs[i], std::abs(v2 - v1));
            scale = std::max({scale, std::abs(v1), std::abs(v2)});
        }
    }
    const double eps_floor = 1e-14 * std::max(1.0, scale);
    if (*std::max_element(diffs.begin(), diffs.end()) < eps_floor) {
        out.identical = true;
        out.fit.h_grid = h_grid;
        out.fit.errors = diffs;
        out.fit.degenerate = true;
        out.fit.note = "identical to machine precision";
        out.contact_order = std::numeric_limits<int>::max();
        return out;
    }
    out.fit = fit_loglog(h_grid, diffs);
    out.contact_order =
        out.fit.degenerate ? 0 : static_cast<int>(std::ceil(out.fit.slope)) - 1;
    return out;
}

}  // namespace velint
