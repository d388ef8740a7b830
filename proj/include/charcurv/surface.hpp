#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "charcurv/scalar_field.hpp"
#include "charcurv/symplectic.hpp"
#include "charcurv/types.hpp"

namespace charcurv {

/// Hypersurface M = {f = 0} in R^{2n+2}, presented by a defining function.
struct DefiningFunctionSurface {
    int n = 1;
    ScalarField f;
    double level_tol = 1e-8;
    double critical_tol = 1e-10;
    double tangency_tol = 1e-8;

    int dim() const { return 2 * n + 2; }
};

/// Orthonormal frame {X_1..X_n, Y_1..Y_n, T, N} at a surface point with
/// Y_k = J X_k and T = -J N.
struct AdaptedFrame {
    PhasePoint base;
    VectorXd N;
    VectorXd T;
    std::vector<VectorXd> X;
    std::vector<VectorXd> Y;
};

namespace detail {

inline VectorXd checked_gradient(const DefiningFunctionSurface& S, const VectorXd& z) {
    if (z.size() != S.dim()) throw dimension_error("surface point has wrong dimension");
    const double fv = S.f.value(z);
    if (std::abs(fv) > S.level_tol)
        throw std::invalid_argument("point is not on the surface: |f(z)| = " + std::to_string(std::abs(fv)));
    VectorXd g = S.f.gradient(z);
    if (g.norm() <= S.critical_tol)
        throw critical_point_error("critical point of the defining function");
    return g;
}

}  // namespace detail

/// Inner unit normal N = -grad f / |grad f|.
inline VectorXd unit_normal(const DefiningFunctionSurface& S, const VectorXd& z) {
    const VectorXd g = detail::checked_gradient(S, z);
    return VectorXd(-g / g.norm());
}

/// Characteristic direction T = -J(N) = J grad f / |grad f|; the normalized
/// Hamiltonian vector field of the defining function.
inline VectorXd characteristic_direction(const DefiningFunctionSurface& S, const VectorXd& z) {
    const VectorXd g = detail::checked_gradient(S, z);
    return VectorXd(apply_J(g) / g.norm());
}

/// Characteristic curvature of M at z, from the defining function:
///   C = <D^2 f J grad f, J grad f> / |grad f|^3.
inline double surface_characteristic_curvature(const DefiningFunctionSurface& S, const VectorXd& z) {
    const VectorXd g = detail::checked_gradient(S, z);
    const VectorXd w = apply_J(g);
    const double gn = g.norm();
    return w.dot(S.f.hessian(z) * w) / (gn * gn * gn);
}

/// Builds the adapted frame by Gram-Schmidt over canonical seeds in fixed
/// index order, pairing each accepted X_k with J X_k before seeking the next
/// seed. Deterministic for a fixed input.
inline AdaptedFrame adapted_frame(const DefiningFunctionSurface& S, const VectorXd& z) {
    const VectorXd g = detail::checked_gradient(S, z);
    const int d = S.dim();

    AdaptedFrame fr;
    fr.base = PhasePoint(z, S.n);
    fr.N = -g / g.norm();
    fr.T = -apply_J(fr.N);

    std::vector<VectorXd> basis{fr.N, fr.T};
    const double seed_tol = 1e-6;
    for (int seed = 0; seed < d && static_cast<int>(fr.X.size()) < S.n; ++seed) {
        VectorXd w = VectorXd::Unit(d, seed);
        for (int pass = 0; pass < 2; ++pass)  // second pass tightens orthogonality
            for (const auto& b : basis) w -= b.dot(w) * b;
        if (w.norm() <= seed_tol) continue;
        w.normalize();
        fr.X.push_back(w);
        fr.Y.push_back(apply_J(w));
        basis.push_back(fr.X.back());
        basis.push_back(fr.Y.back());
    }
    if (static_cast<int>(fr.X.size()) != S.n)
        throw std::runtime_error("adapted_frame: Gram-Schmidt breakdown over all canonical seeds");
    return fr;
}

/// Second fundamental form on level sets, h(V, W) = <D^2 f V, W> / |grad f|,
/// taken with respect to the inner normal. Inputs must be tangent at z.
inline double second_fundamental_form(const DefiningFunctionSurface& S, const VectorXd& z,
                                      const VectorXd& V, const VectorXd& W) {
    const VectorXd g = detail::checked_gradient(S, z);
    const double gn = g.norm();
    for (const auto* v : {&V, &W}) {
        if (v->size() != z.size()) throw dimension_error("second_fundamental_form: tangent vector dimension mismatch");
        const double res = std::abs(g.dot(*v));
        if (res > S.tangency_tol * v->norm() * gn)
            throw tangency_error("vector is not tangent: |<V, grad f>| = " + std::to_string(res) +
                                 " exceeds tol * |V| * |grad f| = " +
                                 std::to_string(S.tangency_tol * v->norm() * gn));
    }
    return V.dot(S.f.hessian(z) * W) / gn;
}

/// Classical mean curvature: trace of h over the adapted tangent frame
/// {X, Y, T}, divided by 2n+1.
inline double mean_curvature(const DefiningFunctionSurface& S, const VectorXd& z) {
    const AdaptedFrame fr = adapted_frame(S, z);
    const MatrixXd H = S.f.hessian(z);
    const double gn = S.f.gradient(z).norm();
    double tr = fr.T.dot(H * fr.T);
    for (int k = 0; k < S.n; ++k) tr += fr.X[k].dot(H * fr.X[k]) + fr.Y[k].dot(H * fr.Y[k]);
    return tr / (gn * (2.0 * S.n + 1.0));
}

/// Levi mean curvature: the Levi trace over unit-normalized complex
/// directions, L = (1/2n) sum_k [h(X_k,X_k) + h(Y_k,Y_k)].
inline double levi_mean_curvature(const DefiningFunctionSurface& S, const VectorXd& z) {
    const AdaptedFrame fr = adapted_frame(S, z);
    const MatrixXd H = S.f.hessian(z);
    const double gn = S.f.gradient(z).norm();
    double tr = 0.0;
    for (int k = 0; k < S.n; ++k) tr += fr.X[k].dot(H * fr.X[k]) + fr.Y[k].dot(H * fr.Y[k]);
    return tr / (gn * 2.0 * S.n);
}

/// Residual of the curvature relation (2n+1) H_M = 2n L_M + C_M, with the
/// characteristic term evaluated through the Hamiltonian-field formula
/// rather than the frame.
inline double curvature_relation_residual(const DefiningFunctionSurface& S, const VectorXd& z) {
    const double hm = mean_curvature(S, z);
    const double lm = levi_mean_curvature(S, z);
    const double cm = surface_characteristic_curvature(S, z);
    return (2.0 * S.n + 1.0) * hm - 2.0 * S.n * lm - cm;
}

}  // namespace charcurv
