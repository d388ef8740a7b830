#pragma once

// Shared helpers and independent oracles for the test suite. Everything here
// deliberately avoids the library's own frame/curvature code paths.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <complex>
#include <random>

#include "charcurv/catalog.hpp"
#include "charcurv/graph_operator.hpp"
#include "charcurv/scalar_field.hpp"
#include "charcurv/surface.hpp"

namespace testsupport {

using charcurv::MatrixXd;
using charcurv::ScalarField;
using charcurv::VectorXd;

inline VectorXd random_vector(int d, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> gauss(0.0, scale);
    VectorXd v(d);
    for (int i = 0; i < d; ++i) v(i) = gauss(rng);
    return v;
}

inline MatrixXd random_symmetric(int d, std::mt19937_64& rng, double scale = 1.0) {
    MatrixXd M = MatrixXd::NullaryExpr(d, d, [&](Eigen::Index, Eigen::Index) {
        std::normal_distribution<double> gauss(0.0, scale);
        return gauss(rng);
    });
    return 0.5 * (M + M.transpose());
}

/// Random quadratic field q(z) = z^T Q z / 2 + b^T z shifted so that z0 lies
/// on its zero level set.
inline ScalarField random_quadric_through(const VectorXd& z0, std::mt19937_64& rng) {
    const int d = static_cast<int>(z0.size());
    const MatrixXd Q = random_symmetric(d, rng);
    const VectorXd b = random_vector(d, rng);
    const double c = 0.5 * z0.dot(Q * z0) + b.dot(z0);
    return ScalarField::analytic(
        [Q, b, c](const VectorXd& z) { return 0.5 * z.dot(Q * z) + b.dot(z) - c; },
        [Q, b](const VectorXd& z) { return VectorXd(Q * z + b); }, [Q](const VectorXd&) { return Q; });
}

/// Random orthogonal matrix on R^{2m} commuting with J, as the realification
/// [[C, -S], [S, C]] of a random complex unitary C + iS.
inline MatrixXd random_J_commuting_orthogonal(int m, std::mt19937_64& rng) {
    using CMat = Eigen::MatrixXcd;
    std::normal_distribution<double> gauss(0.0, 1.0);
    CMat Z(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) Z(i, j) = std::complex<double>(gauss(rng), gauss(rng));
    const CMat U = Eigen::HouseholderQR<CMat>(Z).householderQ();
    MatrixXd Q(2 * m, 2 * m);
    Q.topLeftCorner(m, m) = U.real();
    Q.topRightCorner(m, m) = -U.imag();
    Q.bottomLeftCorner(m, m) = U.imag();
    Q.bottomRightCorner(m, m) = U.real();
    return Q;
}

/// Frame-free mean-curvature oracle for level sets with inner normal:
///   H = (tr D^2 f - <D^2 f N, N>) / ((2n+1) |grad f|).
inline double mean_curvature_full_trace(const charcurv::DefiningFunctionSurface& S, const VectorXd& z) {
    const VectorXd g = S.f.gradient(z);
    const MatrixXd H = S.f.hessian(z);
    const VectorXd N = -g / g.norm();
    return (H.trace() - N.dot(H * N)) / (g.norm() * (2.0 * S.n + 1.0));
}

/// Principal curvatures via the projected shape operator P (D^2 f / |grad f|) P
/// with P = I - N N^T; its spectrum is {0 (normal)} plus the tangent
/// curvatures.
inline VectorXd shape_operator_spectrum(const charcurv::DefiningFunctionSurface& S, const VectorXd& z) {
    const VectorXd g = S.f.gradient(z);
    const VectorXd N = -g / g.norm();
    const MatrixXd P = MatrixXd::Identity(z.size(), z.size()) - N * N.transpose();
    const MatrixXd shape = P * (S.f.hessian(z) / g.norm()) * P;
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(shape);
    return eig.eigenvalues();
}

/// Defining function f(z) = u(xi(z)) - s of the graph of u, with analytic
/// jets assembled through the graph-to-phase index map.
inline ScalarField graph_defining_function(const ScalarField& u, int n) {
    const int d = 2 * n + 1;
    auto project = [n, d](const VectorXd& z) {
        VectorXd xi(d);
        for (int i = 0; i < d; ++i) xi(i) = z(charcurv::graph_axis_to_phase(i, n));
        return xi;
    };
    return ScalarField::analytic(
        [u, project, n](const VectorXd& z) { return u.value(project(z)) - z(2 * n + 1); },
        [u, project, n, d](const VectorXd& z) {
            const VectorXd g = u.gradient(project(z));
            VectorXd out = VectorXd::Zero(2 * n + 2);
            for (int i = 0; i < d; ++i) out(charcurv::graph_axis_to_phase(i, n)) = g(i);
            out(2 * n + 1) = -1.0;
            return out;
        },
        [u, project, n, d](const VectorXd& z) {
            const MatrixXd H = u.hessian(project(z));
            MatrixXd out = MatrixXd::Zero(2 * n + 2, 2 * n + 2);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    out(charcurv::graph_axis_to_phase(i, n), charcurv::graph_axis_to_phase(j, n)) = H(i, j);
            return out;
        });
}

/// Phase point of the graph of u over xi.
inline VectorXd graph_point(const ScalarField& u, const VectorXd& xi, int n) {
    VectorXd z(2 * n + 2);
    for (int i = 0; i < 2 * n + 1; ++i) z(charcurv::graph_axis_to_phase(i, n)) = xi(i);
    z(2 * n + 1) = u.value(xi);
    return z;
}

}  // namespace testsupport
