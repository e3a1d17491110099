#include "velint/lagrangian.hpp"

#include "velint/numdiff.hpp"

#include <cmath>

namespace velint {

namespace {

constexpr double kConditionGuard = 1e12;

}  // namespace

SystemPtr make_lagrangian(const MechanicalSystem& mech) {
    auto sys = std::make_shared<LagrangianSystem>();
    const Eigen::Index n = mech.dim;
    sys->dim = n;
    sys->L = [mech](const Vec& q, const Vec& v) { return 0.5 * v.dot(mech.M(q) * v) - mech.V(q); };
    sys->dLdq = [mech, n](const Vec& q, const Vec& v) {
        const std::vector<Mat> dM = mech.dM(q);
        Vec g = -mech.dV(q);
        for (Eigen::Index k = 0; k < n; ++k) g[k] += 0.5 * v.dot(dM[k] * v);
        return g;
    };
    sys->dLdv = [mech](const Vec& q, const Vec& v) { return Vec(mech.M(q) * v); };
    sys->d2Ldv2 = [mech](const Vec& q, const Vec&) { return mech.M(q); };
    sys->d2Ldqdv = [mech, n](const Vec& q, const Vec& v) {
        const std::vector<Mat> dM = mech.dM(q);
        Mat J(n, n);
        for (Eigen::Index k = 0; k < n; ++k) J.col(k) = dM[k] * v;
        return J;
    };
    return sys;
}

SystemPtr mechanical_1d(std::function<double(double)> g, std::function<double(double)> dg,
                        std::function<double(double)> V, std::function<double(double)> dV) {
    MechanicalSystem mech;
    mech.dim = 1;
    mech.M = [g](const Vec& q) { return Mat::Constant(1, 1, g(q[0])); };
    mech.dM = [dg](const Vec& q) { return std::vector<Mat>{Mat::Constant(1, 1, dg(q[0]))}; };
    mech.V = [V](const Vec& q) { return V(q[0]); };
    mech.dV = [dV](const Vec& q) { return Vec::Constant(1, dV(q[0])); };
    return make_lagrangian(mech);
}

SystemPtr make_lagrangian_fd(Eigen::Index dim, std::function<double(const Vec&, const Vec&)> L,
                             std::function<Vec(const Vec&, const Vec&)> dLdq,
                             std::function<Vec(const Vec&, const Vec&)> dLdv) {
    auto sys = std::make_shared<LagrangianSystem>();
    sys->dim = dim;
    sys->L = L;
    sys->dLdq = dLdq;
    sys->dLdv = dLdv;
    sys->fd_hessian = true;
    sys->d2Ldv2 = [dLdv](const Vec& q, const Vec& v) {
        const double step = fd_step(1e-6, v);
        return central_jacobian([&](const Vec& vv) { return dLdv(q, vv); }, v, step);
    };
    sys->d2Ldqdv = [dLdv](const Vec& q, const Vec& v) {
        const double step = fd_step(1e-6, q);
        return central_jacobian([&](const Vec& qq) { return dLdv(qq, v); }, q, step);
    };
    return sys;
}

SystemPtr harmonic_oscillator() {
    return mechanical_1d([](double) { return 1.0; }, [](double) { return 0.0; },
                         [](double q) { return 0.5 * q * q; }, [](double q) { return q; });
}

SystemPtr pendulum() {
    return mechanical_1d([](double) { return 1.0; }, [](double) { return 0.0; },
                         [](double q) { return -std::cos(q); }, [](double q) { return std::sin(q); });
}

SystemPtr free_particle() {
    return mechanical_1d([](double) { return 1.0; }, [](double) { return 0.0; },
                         [](double) { return 0.0; }, [](double) { return 0.0; });
}

SystemPtr curved_oscillator() {
    return mechanical_1d([](double q) { return 1.0 + q * q; }, [](double q) { return 2.0 * q; },
                         [](double q) { return 0.5 * q * q; }, [](double q) { return q; });
}

double eval_lagrangian(const LagrangianSystem& sys, const TangentVector& x) {
    require_dim(x, sys.dim, "eval_lagrangian");
    return sys.L(x.q, x.v);
}

Vec fiber_legendre(const LagrangianSystem& sys, const TangentVector& x) {
    require_dim(x, sys.dim, "fiber_legendre");
    return sys.dLdv(x.q, x.v);
}

double energy(const LagrangianSystem& sys, const TangentVector& x) {
    return sys.dLdv(x.q, x.v).dot(x.v) - sys.L(x.q, x.v);
}

Vec solve_fiber_hessian(const LagrangianSystem& sys, const TangentVector& x, const Vec& rhs) {
    const Mat H = sys.d2Ldv2(x.q, x.v);
    Eigen::JacobiSVD<Mat> svd(H, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (!(sv.minCoeff() > 0.0) || sv.maxCoeff() / sv.minCoeff() > kConditionGuard)
        throw RegularityError("fiber Hessian singular to working precision (regularity violation)");
    return svd.solve(rhs);
}

Vec euler_lagrange_accel(const LagrangianSystem& sys, const TangentVector& x) {
    require_dim(x, sys.dim, "euler_lagrange_accel");
    const Vec rhs = sys.dLdq(x.q, x.v) - sys.d2Ldqdv(x.q, x.v) * x.v;
    return solve_fiber_hessian(sys, x, rhs);
}

double derivative_consistency(const LagrangianSystem& sys, const std::vector<TangentVector>& states) {
    double worst = 0.0;
    for (const auto& x : states) {
        const double sq = fd_step(std::cbrt(std::numeric_limits<double>::epsilon()), x.q);
        const double sv = fd_step(std::cbrt(std::numeric_limits<double>::epsilon()), x.v);
        const Vec gq = central_gradient([&](const Vec& q) { return sys.L(q, x.v); }, x.q, sq);
        const Vec gv = central_gradient([&](const Vec& v) { return sys.L(x.q, v); }, x.v, sv);
        const double scale = 1.0 + gq.cwiseAbs().maxCoeff() + gv.cwiseAbs().maxCoeff();
        worst = std::max(worst, (gq - sys.dLdq(x.q, x.v)).cwiseAbs().maxCoeff() / scale);
        worst = std::max(worst, (gv - sys.dLdv(x.q, x.v)).cwiseAbs().maxCoeff() / scale);
    }
    return worst;
}

}  // namespace velint
