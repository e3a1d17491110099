#pragma once

#include "velint/discretization.hpp"
#include "velint/lagrangian.hpp"
#include "velint/order_fit.hpp"
#include "velint/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace velint {

enum class Family { LeftRectangle, Midpoint, Trapezoid, Exact, UserDefined };

std::string family_name(Family f);

struct FamilyParams {
    double a = 0.0;      ///< LeftRectangle: coefficient of the h^2 sum(v) term
    double tol = 1e-10;  ///< Exact: quadrature / flow tolerance
};

/// A discrete Lagrangian L_h on TQ, tied to the discretization it was
/// built over. L_0 is identically zero and L_h(v_q) = h L(v_q) + O(h^2).
class DiscreteLagrangianTQ {
public:
    using EvalFn = std::function<double(double h, const TangentVector& x)>;
    using GradFn = std::function<Vec(double h, const TangentVector& x)>;

    double eval(double h, const TangentVector& x) const;
    Vec grad_q(double h, const TangentVector& x) const;
    Vec grad_v(double h, const TangentVector& x) const;

    Family family() const { return family_; }
    double a() const { return a_; }
    double quad_tol() const { return quad_tol_; }
    int claimed_contact_order() const { return claimed_contact_order_; }
    const SystemPtr& system() const { return sys_; }
    const TangentDiscretization& discretization() const { return disc_; }

private:
    friend DiscreteLagrangianTQ make_family(SystemPtr, const TangentDiscretization&, Family,
                                            FamilyParams);
    friend DiscreteLagrangianTQ make_user_family(SystemPtr, const TangentDiscretization&,
                                                 DiscreteLagrangianTQ::EvalFn, int,
                                                 DiscreteLagrangianTQ::GradFn,
                                                 DiscreteLagrangianTQ::GradFn);

    Family family_ = Family::LeftRectangle;
    double a_ = 0.0;
    double quad_tol_ = 1e-10;
    int claimed_contact_order_ = 1;
    SystemPtr sys_;
    TangentDiscretization disc_ = TangentDiscretization::linear(0.0);
    EvalFn eval_fn_;  // UserDefined only
    GradFn grad_q_fn_, grad_v_fn_;
};

DiscreteLagrangianTQ make_family(SystemPtr sys, const TangentDiscretization& d, Family family,
                                 FamilyParams params = {});

DiscreteLagrangianTQ make_user_family(SystemPtr sys, const TangentDiscretization& d,
                                      DiscreteLagrangianTQ::EvalFn eval, int claimed_order,
                                      DiscreteLagrangianTQ::GradFn grad_q = nullptr,
                                      DiscreteLagrangianTQ::GradFn grad_v = nullptr);

/// The Q x Q counterpart L_h^{QxQ}(q^+, q^-) with its partial derivatives.
struct DiscreteLagrangianQQ {
    Eigen::Index dim = 1;
    std::function<double(double h, const Vec& q_plus, const Vec& q_minus)> eval;
    std::function<Vec(double h, const Vec& q_plus, const Vec& q_minus)> d_plus;
    std::function<Vec(double h, const Vec& q_plus, const Vec& q_minus)> d_minus;
};

/// Conjugate a TQ discrete Lagrangian to Q x Q through Psi_h.
DiscreteLagrangianQQ to_qq(const DiscreteLagrangianTQ& dl, const TangentDiscretization& d);

/// Q x Q discrete Lagrangian from a raw evaluation map; missing partial
/// derivatives are filled in by central differences.
DiscreteLagrangianQQ make_qq(Eigen::Index dim,
                             std::function<double(double, const Vec&, const Vec&)> eval,
                             std::function<Vec(double, const Vec&, const Vec&)> d_plus = nullptr,
                             std::function<Vec(double, const Vec&, const Vec&)> d_minus = nullptr);

struct LegendrePair {
    Vec f_plus;   ///< F^+ L_h =  d L_h / d q^+
    Vec f_minus;  ///< F^- L_h = -d L_h / d q^-
};

LegendrePair legendre(const DiscreteLagrangianQQ& dl, double h, const Vec& q_plus,
                      const Vec& q_minus);

struct ContactReport {
    OrderReport fit;
    int contact_order = 0;  ///< ceil(slope) - 1
    bool identical = false; ///< difference below machine precision everywhere
};

/// Fitted slope of log |dl2 - dl1| against log h, averaged over states;
/// estimates the contact order of the two families' discrete Lagrangians.
ContactReport contact_order_estimate(const DiscreteLagrangianTQ& dl1,
                                     const DiscreteLagrangianTQ& dl2,
                                     const std::vector<TangentVector>& states,
                                     const std::vector<double>& h_grid);

}  // namespace velint
