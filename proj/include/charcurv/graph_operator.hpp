#pragma once

#include <cmath>
#include <functional>
#include <iostream>
#include <limits>
#include <utility>
#include <vector>

#include "charcurv/scalar_field.hpp"
#include "charcurv/types.hpp"

namespace charcurv {

// Graph coordinates are xi = (x_1..x_n, y_1..y_n, t) in R^{2n+1}; the graph
// point of u lives at z = (x_1..x_n, t, y_1..y_n, s = u(xi)) in phase order.

/// Phase index of graph axis i (0..2n), under the layout above.
inline int graph_axis_to_phase(int i, int n) {
    if (i < n) return i;             // x_k
    if (i < 2 * n) return i + 1;     // y_k
    return n;                        // t = x_{n+1}
}

/// Lifts a field rho(xi) on R^{2n+1} to the s-independent cylinder field
/// f(z) = rho(xi(z)) on R^{2n+2}; level sets are the cylinders bdry x R.
inline ScalarField lift_to_cylinder(const ScalarField& rho, int n) {
    const int d = 2 * n + 1;
    auto project = [n, d](const VectorXd& z) {
        VectorXd xi(d);
        for (int i = 0; i < d; ++i) xi(i) = z(graph_axis_to_phase(i, n));
        return xi;
    };
    return ScalarField::analytic(
        [rho, project](const VectorXd& z) { return rho.value(project(z)); },
        [rho, project, n, d](const VectorXd& z) {
            const VectorXd g = rho.gradient(project(z));
            VectorXd out = VectorXd::Zero(2 * n + 2);
            for (int i = 0; i < d; ++i) out(graph_axis_to_phase(i, n)) = g(i);
            return out;
        },
        [rho, project, n, d](const VectorXd& z) {
            const MatrixXd H = rho.hessian(project(z));
            MatrixXd out = MatrixXd::Zero(2 * n + 2, 2 * n + 2);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) out(graph_axis_to_phase(i, n), graph_axis_to_phase(j, n)) = H(i, j);
            return out;
        });
}

/// Second-order data (Du, D^2u) of a graph function at one point. The
/// Hessian is symmetrized on ingestion; asymmetry beyond 1e-9 is reported.
class GraphJet {
public:
    GraphJet(VectorXd p, MatrixXd lambda) : p_(std::move(p)), lambda_(std::move(lambda)) {
        const auto d = p_.size();
        if (d < 3 || d % 2 == 0) throw dimension_error("GraphJet: gradient length must be odd and >= 3");
        if (lambda_.rows() != d || lambda_.cols() != d)
            throw dimension_error("GraphJet: Hessian must be d x d with d = gradient length");
        const double asym = (lambda_ - lambda_.transpose()).cwiseAbs().maxCoeff();
        if (asym > 1e-9)
            std::cerr << "GraphJet: symmetrizing Hessian with asymmetry " << asym << "\n";
        lambda_ = 0.5 * (lambda_ + lambda_.transpose()).eval();
        n_ = static_cast<int>((d - 1) / 2);
    }

    int n() const { return n_; }
    int dim() const { return 2 * n_ + 1; }
    const VectorXd& p() const { return p_; }
    const MatrixXd& lambda() const { return lambda_; }
    auto ux() const { return p_.head(n_); }
    auto uy() const { return p_.segment(n_, n_); }
    double ut() const { return p_(2 * n_); }

private:
    int n_;
    VectorXd p_;
    MatrixXd lambda_;
};

/// sigma(Du) = (-u_y, u_x, 1)^T; depends only on the x and y slots.
inline VectorXd sigma(const VectorXd& p) {
    const auto d = p.size();
    if (d < 3 || d % 2 == 0) throw dimension_error("sigma: gradient length must be odd and >= 3");
    const auto n = (d - 1) / 2;
    VectorXd s(d);
    s.head(n) = -p.segment(n, n);
    s.segment(n, n) = p.head(n);
    s(d - 1) = 1.0;
    return s;
}

/// A(Du) = sigma(Du) sigma(Du)^T: rank one, positive semidefinite.
inline MatrixXd assemble_A(const VectorXd& p) {
    const VectorXd s = sigma(p);
    return s * s.transpose();
}

/// The characteristic operator in graph form,
///   T u = tr(A(Du) D^2u) / (1 + |Du|^2)^{3/2};
/// |Du|^2 includes the t-derivative.
inline double char_operator_value(const GraphJet& jet) {
    const double w = 1.0 + jet.p().squaredNorm();
    return (assemble_A(jet.p()) * jet.lambda()).trace() / (w * std::sqrt(w));
}

/// Expanded n = 1 form:
///   (u_y^2 u_xx + u_x^2 u_yy + u_tt - 2 u_x u_y u_xy + 2 u_x u_yt - 2 u_y u_xt)
///   / (1 + |Du|^2)^{3/2}.
inline double char_operator_n1(const GraphJet& jet) {
    if (jet.dim() != 3) throw dimension_error("char_operator_n1: requires d = 3");
    const double ux = jet.p()(0), uy = jet.p()(1);
    const MatrixXd& L = jet.lambda();
    const double num = uy * uy * L(0, 0) + ux * ux * L(1, 1) + L(2, 2) - 2.0 * ux * uy * L(0, 1) +
                       2.0 * ux * L(1, 2) - 2.0 * uy * L(0, 2);
    const double w = 1.0 + jet.p().squaredNorm();
    return num / (w * std::sqrt(w));
}

/// The 2n zero-eigenvalue directions of A(Du):
///   e_{x_k} + u_{y_k} e_t  and  e_{y_k} - u_{x_k} e_t, k = 1..n.
inline std::vector<VectorXd> null_eigenvectors(const VectorXd& p) {
    const auto d = p.size();
    if (d < 3 || d % 2 == 0) throw dimension_error("null_eigenvectors: gradient length must be odd and >= 3");
    const auto n = (d - 1) / 2;
    std::vector<VectorXd> out;
    out.reserve(2 * n);
    for (Eigen::Index k = 0; k < n; ++k) {
        VectorXd v = VectorXd::Unit(d, k);
        v(d - 1) = p(n + k);  // u_{y_k}
        out.push_back(v);
    }
    for (Eigen::Index k = 0; k < n; ++k) {
        VectorXd v = VectorXd::Unit(d, n + k);
        v(d - 1) = -p(k);  // -u_{x_k}
        out.push_back(v);
    }
    return out;
}

/// The positive eigenpair of A(Du): (sigma(Du), 1 + |u_x|^2 + |u_y|^2).
inline std::pair<VectorXd, double> principal_eigenpair(const VectorXd& p) {
    const auto n = (p.size() - 1) / 2;
    return {sigma(p), 1.0 + p.head(2 * n).squaredNorm()};
}

/// A^eps(p) = A(p) + eps I; strictly positive definite for eps > 0.
inline MatrixXd regularized_A(const VectorXd& p, double eps) {
    if (eps < 0.0) throw std::invalid_argument("regularized_A: eps must be nonnegative");
    MatrixXd A = assemble_A(p);
    A.diagonal().array() += eps;
    return A;
}

/// Prescribed curvature function k(x, r), optionally with partial
/// derivatives, and the monotonicity regime it claims to satisfy.
struct CurvatureSpec {
    enum class Monotonicity { strictly_increasing_in_r, nondecreasing_r_x_free, general };

    std::function<double(const VectorXd&, double)> k;
    std::function<double(const VectorXd&, double)> dk_dr;    // optional
    std::function<VectorXd(const VectorXd&, double)> dk_dx;  // optional
    Monotonicity monotonicity = Monotonicity::general;
    // sup over (x, r) when known; NaN = unknown
    double sup_over_r = std::numeric_limits<double>::quiet_NaN();
};

inline CurvatureSpec constant_k(double c) {
    CurvatureSpec spec;
    spec.k = [c](const VectorXd&, double) { return c; };
    spec.dk_dr = [](const VectorXd&, double) { return 0.0; };
    spec.dk_dx = [](const VectorXd& x, double) { return VectorXd(VectorXd::Zero(x.size())); };
    spec.monotonicity = CurvatureSpec::Monotonicity::nondecreasing_r_x_free;
    spec.sup_over_r = c;
    return spec;
}

/// k(x, r) = c + slope * r; strictly increasing in r for slope > 0.
inline CurvatureSpec affine_k(double c, double slope) {
    CurvatureSpec spec;
    spec.k = [c, slope](const VectorXd&, double r) { return c + slope * r; };
    spec.dk_dr = [slope](const VectorXd&, double) { return slope; };
    spec.dk_dx = [](const VectorXd& x, double) { return VectorXd(VectorXd::Zero(x.size())); };
    spec.monotonicity = slope > 0.0 ? CurvatureSpec::Monotonicity::strictly_increasing_in_r
                                    : CurvatureSpec::Monotonicity::nondecreasing_r_x_free;
    spec.sup_over_r = slope > 0.0 ? std::numeric_limits<double>::infinity() : c;
    return spec;
}

/// Samples the declared monotonicity regime: dk/dr >= 0 where claimed, and
/// x-independence for the x-free regime. Uses finite differences when the
/// partials are not supplied.
inline bool spot_check_monotonicity(const CurvatureSpec& spec, const std::vector<VectorXd>& xs,
                                    double r_min, double r_max, int r_steps = 8) {
    if (spec.monotonicity == CurvatureSpec::Monotonicity::general) return true;
    const double dr = (r_max - r_min) / std::max(1, r_steps);
    for (const auto& x : xs) {
        for (int i = 0; i <= r_steps; ++i) {
            const double r = r_min + i * dr;
            const double slope = spec.dk_dr ? spec.dk_dr(x, r)
                                            : (spec.k(x, r + 1e-6) - spec.k(x, r - 1e-6)) / 2e-6;
            if (slope < -1e-12) return false;
            if (spec.monotonicity == CurvatureSpec::Monotonicity::nondecreasing_r_x_free &&
                std::abs(spec.k(x, r) - spec.k(xs.front(), r)) > 1e-12)
                return false;
        }
    }
    return true;
}

/// The proper operator F^eps(x, r, p, Lambda) = -tr(A~^eps(p) Lambda) + k(x, r)
/// with A~^eps(p) = (A(p) + eps I) / (1 + |p|^2)^{3/2}. Subsolutions satisfy
/// F <= 0, supersolutions F >= 0; eps = 0 gives the degenerate operator.
inline double F_value(const VectorXd& x, double r, const GraphJet& jet, const CurvatureSpec& k,
                      double eps) {
    const double w = 1.0 + jet.p().squaredNorm();
    const double tr = (regularized_A(jet.p(), eps) * jet.lambda()).trace() / (w * std::sqrt(w));
    return -tr + k.k(x, r);
}

}  // namespace charcurv
