#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace velint {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// A configuration point q in R^n.
using ConfigPoint = Vec;

/// A tangent vector: base point q and velocity v, same dimension.
struct TangentVector {
    Vec q;
    Vec v;

    TangentVector() = default;
    TangentVector(Vec q_, Vec v_) : q(std::move(q_)), v(std::move(v_)) {}

    /// 1-D convenience.
    TangentVector(double q_, double v_) : q(Vec::Constant(1, q_)), v(Vec::Constant(1, v_)) {}

    Eigen::Index dim() const { return q.size(); }
};

struct FlowState {
    double t = 0.0;
    TangentVector state;
};

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
    using Error::Error;
};

/// Fiber Hessian singular (or nearly so) at a queried point.
struct RegularityError : Error {
    using Error::Error;
};

/// Step-size underflow or non-finite state during flow integration.
struct FlowError : Error {
    using Error::Error;
};

/// Newton / shooting iteration failed to converge.
struct ConvergenceError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

inline void require_dim(const TangentVector& x, Eigen::Index n, const char* where) {
    if (x.q.size() != n || x.v.size() != n)
        throw DimensionError(std::string(where) + ": expected dimension " + std::to_string(n));
}

/// Deterministic uniform sampler. mt19937_64 raw draws are mapped to
/// [0,1) by hand so streams are identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    double unit() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    Vec uniform_vec(Eigen::Index n, double lo, double hi) {
        Vec out(n);
        for (Eigen::Index i = 0; i < n; ++i) out[i] = uniform(lo, hi);
        return out;
    }

private:
    // xorshift-free splitmix-style advance feeding an LCG-ish mix; compact
    // and fully portable. Quality is ample for sampling test states.
    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace velint
