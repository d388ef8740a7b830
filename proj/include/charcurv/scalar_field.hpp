#pragma once

#include <functional>
#include <utility>

#include "charcurv/types.hpp"

namespace charcurv {

/// A twice-differentiable scalar function on R^d, presented either with
/// analytic gradient/Hessian callables or value-only with central
/// finite-difference jets at a configurable step.
class ScalarField {
public:
    using ValueFn = std::function<double(const VectorXd&)>;
    using GradFn = std::function<VectorXd(const VectorXd&)>;
    using HessFn = std::function<MatrixXd(const VectorXd&)>;

    ScalarField() = default;

    static ScalarField analytic(ValueFn value, GradFn grad, HessFn hess) {
        ScalarField f;
        f.value_ = std::move(value);
        f.grad_ = std::move(grad);
        f.hess_ = std::move(hess);
        return f;
    }

    static ScalarField from_value_only(ValueFn value, double fd_step = 1e-5) {
        ScalarField f;
        f.value_ = std::move(value);
        f.fd_step_ = fd_step;
        return f;
    }

    bool has_analytic_jets() const { return static_cast<bool>(grad_) && static_cast<bool>(hess_); }
    double fd_step() const { return fd_step_; }
    void set_fd_step(double h) { fd_step_ = h; }

    double value(const VectorXd& z) const { return value_(z); }

    VectorXd gradient(const VectorXd& z) const {
        if (grad_) return grad_(z);
        const auto d = z.size();
        VectorXd g(d);
        VectorXd zp = z, zm = z;
        for (Eigen::Index i = 0; i < d; ++i) {
            zp(i) = z(i) + fd_step_;
            zm(i) = z(i) - fd_step_;
            g(i) = (value_(zp) - value_(zm)) / (2.0 * fd_step_);
            zp(i) = z(i);
            zm(i) = z(i);
        }
        return g;
    }

    /// Symmetric by construction: diagonal from the 3-point stencil,
    /// off-diagonal from the 4-point cross stencil on the upper triangle.
    MatrixXd hessian(const VectorXd& z) const {
        if (hess_) return hess_(z);
        const auto d = z.size();
        const double h = fd_step_;
        MatrixXd H(d, d);
        const double f0 = value_(z);
        VectorXd w = z;
        for (Eigen::Index i = 0; i < d; ++i) {
            w(i) = z(i) + h;
            const double fp = value_(w);
            w(i) = z(i) - h;
            const double fm = value_(w);
            w(i) = z(i);
            H(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
        }
        for (Eigen::Index i = 0; i < d; ++i) {
            for (Eigen::Index j = i + 1; j < d; ++j) {
                w(i) = z(i) + h;
                w(j) = z(j) + h;
                const double fpp = value_(w);
                w(j) = z(j) - h;
                const double fpm = value_(w);
                w(i) = z(i) - h;
                const double fmm = value_(w);
                w(j) = z(j) + h;
                const double fmp = value_(w);
                w(i) = z(i);
                w(j) = z(j);
                H(i, j) = H(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
            }
        }
        return H;
    }

    Jet2 jet(const VectorXd& z) const { return Jet2{value(z), gradient(z), hessian(z)}; }

private:
    ValueFn value_;
    GradFn grad_;
    HessFn hess_;
    double fd_step_ = 1e-5;
};

/// Pullback of f under the rigid map z -> Q z + b, i.e. the field
/// z -> f(Q^T (z - b)). Gradient and Hessian follow by the chain rule.
inline ScalarField rigid_pullback(const ScalarField& f, const MatrixXd& Q, const VectorXd& b) {
    return ScalarField::analytic(
        [f, Q, b](const VectorXd& z) { return f.value(Q.transpose() * (z - b)); },
        [f, Q, b](const VectorXd& z) { return VectorXd(Q * f.gradient(Q.transpose() * (z - b))); },
        [f, Q, b](const VectorXd& z) {
            return MatrixXd(Q * f.hessian(Q.transpose() * (z - b)) * Q.transpose());
        });
}

/// The field phi(f(z)) for a scalar reparametrization phi with supplied
/// first and second derivatives.
inline ScalarField scalar_compose(const ScalarField& f, std::function<double(double)> phi,
                                  std::function<double(double)> dphi,
                                  std::function<double(double)> ddphi) {
    return ScalarField::analytic(
        [f, phi](const VectorXd& z) { return phi(f.value(z)); },
        [f, dphi](const VectorXd& z) { return VectorXd(dphi(f.value(z)) * f.gradient(z)); },
        [f, dphi, ddphi](const VectorXd& z) {
            const VectorXd g = f.gradient(z);
            const double v = f.value(z);
            return MatrixXd(dphi(v) * f.hessian(z) + ddphi(v) * (g * g.transpose()));
        });
}

/// A Hamiltonian on R^{n+1} x R^{n+1} with its evaluators.
struct HamiltonianSpec {
    int n = 1;
    ScalarField field;
    double critical_tol = 1e-10;

    int dim() const { return 2 * n + 2; }
};

}  // namespace charcurv
