#include "velint/flow.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace velint {

namespace {

// Dormand-Prince 5(4), FSAL, with the Shampine dense-output coefficients.
// The field is autonomous so the c abscissae never appear.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

// Adaptive control is run well below the requested tolerance so that
// downstream consumers (shooting Jacobians, quadrature) see the flow as a
// smooth function of its inputs at their own working tolerances.
double effective_tol(double tol) { return std::clamp(tol * 1e-3, 1e-13, 1e-2); }

using OdeFn = std::function<Vec(const Vec&)>;

double scaled_norm(const Vec& e, const Vec& y0, const Vec& y1, double atol, double rtol) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < e.size(); ++i) {
        const double sk = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double r = e[i] / sk;
        acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(e.size()));
}

double initial_step(const OdeFn& f, const Vec& y0, const Vec& f0, double dir, double span,
                    double atol, double rtol) {
    const double d0 = scaled_norm(y0, y0, y0, atol, rtol);
    const double d1n = scaled_norm(f0, y0, y0, atol, rtol);
    double h = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    h = std::min(h, span);
    const Vec y1 = y0 + dir * h * f0;
    const Vec f1 = f(y1);
    const double d2 = scaled_norm(f1 - f0, y0, y0, atol, rtol) / h;
    const double dmax = std::max(d1n, d2);
    const double h1 = dmax > 1e-15 ? std::pow(0.01 / dmax, 0.2) : std::max(1e-6, h * 1e-3);
    return std::min({100.0 * h, h1, span});
}

// Integrates from t=0 to t_end (either sign); appends accepted steps to sink.
Vec dopri5(const OdeFn& f, const Vec& y0, double t_end, double atol, double rtol,
           std::vector<DenseStep>* sink) {
    if (t_end == 0.0) return y0;
    const double dir = t_end > 0.0 ? 1.0 : -1.0;
    const double span = std::abs(t_end);

    Vec y = y0;
    Vec k1 = f(y);
    if (!k1.allFinite()) throw FlowError("Euler-Lagrange field non-finite at initial state");
    double t = 0.0;
    double h = initial_step(f, y, k1, dir, span, atol, rtol);
    bool rejected = false;

    Vec k2, k3, k4, k5, k6, k7, y1;
    while (dir * t < span) {
        h = std::min(h, span - dir * t);
        if (h < 1e-14 * std::max(1.0, std::abs(t)))
            throw FlowError("flow step-size underflow (stiff or singular trajectory)");
        const double hs = dir * h;

        k2 = f(y + hs * (a21 * k1));
        k3 = f(y + hs * (a31 * k1 + a32 * k2));
        k4 = f(y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
        k5 = f(y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        k6 = f(y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        y1 = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        k7 = f(y1);
        if (!y1.allFinite() || !k7.allFinite())
            throw FlowError("flow state non-finite (trajectory blow-up)");

        const Vec err_vec = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double err = scaled_norm(err_vec, y, y1, atol, rtol);

        if (err <= 1.0) {
            if (sink) {
                DenseStep st;
                st.t0 = t;
                st.h = hs;
                st.r1 = y;
                st.r2 = y1 - y;
                st.r3 = hs * k1 - st.r2;
                st.r4 = st.r2 - hs * k7 - st.r3;
                st.r5 = hs * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
                sink->push_back(std::move(st));
            }
            t += hs;
            y.swap(y1);
            k1.swap(k7);  // FSAL
            const double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
            h *= std::clamp(fac, 0.2, rejected ? 1.0 : 5.0);
            rejected = false;
        } else {
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
            rejected = true;
        }
    }
    return y;
}

OdeFn make_field(const LagrangianSystem& sys) {
    const Eigen::Index n = sys.dim;
    return [&sys, n](const Vec& y) {
        TangentVector x{y.head(n), y.tail(n)};
        Vec dy(2 * n);
        dy.head(n) = x.v;
        dy.tail(n) = euler_lagrange_accel(sys, x);
        return dy;
    };
}

}  // namespace

Vec DenseStep::eval(double t) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    return r1 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
}

Vec FlowSegment::eval_raw(double t) const {
    const double slack = 1e-9 * (1.0 + t_max_ - t_min_);
    if (t < t_min_ - slack || t > t_max_ + slack)
        throw Error("flow dense-output query outside integrated range");
    t = std::clamp(t, t_min_, t_max_);
    if (t == 0.0 || (forward_.empty() && backward_.empty())) return y0_;

    const auto& branch = t > 0.0 ? forward_ : backward_;
    if (branch.empty()) return y0_;
    // first step whose interval contains t
    std::size_t lo = 0, hi = branch.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        const double end = branch[mid].t0 + branch[mid].h;
        const bool covers = t > 0.0 ? (t <= end) : (t >= end);
        if (covers)
            hi = mid;
        else
            lo = mid + 1;
    }
    return branch[lo].eval(t);
}

TangentVector FlowSegment::state(double t) const {
    const Vec y = eval_raw(t);
    return TangentVector{y.head(n_), y.tail(n_)};
}

Vec FlowSegment::position(double t) const { return eval_raw(t).head(n_); }

FlowSegment flow_segment(const LagrangianSystem& sys, const TangentVector& x0, double t_min,
                         double t_max, double tol) {
    require_dim(x0, sys.dim, "flow_segment");
    if (!(tol > 0.0)) throw Error("flow_segment: tol must be positive");
    if (t_min > 0.0 || t_max < 0.0 || t_min > t_max)
        throw Error("flow_segment: interval must contain 0");

    FlowSegment seg;
    seg.n_ = sys.dim;
    seg.t_min_ = t_min;
    seg.t_max_ = t_max;
    seg.y0_.resize(2 * sys.dim);
    seg.y0_ << x0.q, x0.v;

    const OdeFn f = make_field(sys);
    const double etol = effective_tol(tol);
    if (t_max > 0.0) dopri5(f, seg.y0_, t_max, etol, etol, &seg.forward_);
    if (t_min < 0.0) dopri5(f, seg.y0_, t_min, etol, etol, &seg.backward_);
    return seg;
}

TangentVector reference_flow(const LagrangianSystem& sys, const TangentVector& x0, double t,
                             double tol) {
    require_dim(x0, sys.dim, "reference_flow");
    if (!(tol > 0.0)) throw Error("reference_flow: tol must be positive");
    if (t == 0.0) return x0;

    Vec y(2 * sys.dim);
    y << x0.q, x0.v;
    const double etol = effective_tol(tol);
    const Vec yt = dopri5(make_field(sys), y, t, etol, etol, nullptr);
    return TangentVector{yt.head(sys.dim), yt.tail(sys.dim)};
}

}  // namespace velint
