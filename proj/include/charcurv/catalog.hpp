#pragma once

#include <cmath>
#include <random>

#include "charcurv/scalar_field.hpp"
#include "charcurv/surface.hpp"
#include "charcurv/types.hpp"

namespace charcurv {

// Built-in Hamiltonians, surfaces and graph functions covering the worked
// examples: spheres, the two cylinders, ellipsoids, hemisphere graphs.

/// H(x, y) = (|x|^2 + |y|^2) / 2; level E gives the sphere of radius sqrt(2E).
inline HamiltonianSpec sphere_hamiltonian(int n) {
    const int d = 2 * n + 2;
    return HamiltonianSpec{n, ScalarField::analytic(
                                  [](const VectorXd& z) { return 0.5 * z.squaredNorm(); },
                                  [](const VectorXd& z) { return z; },
                                  [d](const VectorXd&) { return MatrixXd(MatrixXd::Identity(d, d)); })};
}

/// H(x, y) = |x|^2 / 2 on R^2 x R^2; levels are the cylinders S^1_R x R^2
/// foliated by straight characteristic lines.
inline HamiltonianSpec cylinder1_hamiltonian() {
    auto mask = [](const VectorXd& z) {
        VectorXd g = VectorXd::Zero(4);
        g(0) = z(0);
        g(1) = z(1);
        return g;
    };
    return HamiltonianSpec{1, ScalarField::analytic(
                                  [](const VectorXd& z) { return 0.5 * (z(0) * z(0) + z(1) * z(1)); },
                                  mask,
                                  [](const VectorXd&) {
                                      MatrixXd H = MatrixXd::Zero(4, 4);
                                      H(0, 0) = H(1, 1) = 1.0;
                                      return H;
                                  })};
}

/// H(x, y) = (x_1^2 + y_1^2) / 2 on R^2 x R^2; levels are cylinders isometric
/// to the previous ones but with circular characteristics.
inline HamiltonianSpec cylinder2_hamiltonian() {
    auto mask = [](const VectorXd& z) {
        VectorXd g = VectorXd::Zero(4);
        g(0) = z(0);
        g(2) = z(2);
        return g;
    };
    return HamiltonianSpec{1, ScalarField::analytic(
                                  [](const VectorXd& z) { return 0.5 * (z(0) * z(0) + z(2) * z(2)); },
                                  mask,
                                  [](const VectorXd&) {
                                      MatrixXd H = MatrixXd::Zero(4, 4);
                                      H(0, 0) = H(2, 2) = 1.0;
                                      return H;
                                  })};
}

inline DefiningFunctionSurface sphere_surface(int n, double R) {
    const int d = 2 * n + 2;
    return DefiningFunctionSurface{
        n, ScalarField::analytic([R](const VectorXd& z) { return 0.5 * (z.squaredNorm() - R * R); },
                                 [](const VectorXd& z) { return z; },
                                 [d](const VectorXd&) { return MatrixXd(MatrixXd::Identity(d, d)); })};
}

inline DefiningFunctionSurface cylinder1_surface(double R) {
    HamiltonianSpec H = cylinder1_hamiltonian();
    const double E = 0.5 * R * R;
    return DefiningFunctionSurface{
        1, ScalarField::analytic([H, E](const VectorXd& z) { return H.field.value(z) - E; },
                                 [H](const VectorXd& z) { return H.field.gradient(z); },
                                 [H](const VectorXd& z) { return H.field.hessian(z); })};
}

inline DefiningFunctionSurface cylinder2_surface(double R) {
    HamiltonianSpec H = cylinder2_hamiltonian();
    const double E = 0.5 * R * R;
    return DefiningFunctionSurface{
        1, ScalarField::analytic([H, E](const VectorXd& z) { return H.field.value(z) - E; },
                                 [H](const VectorXd& z) { return H.field.gradient(z); },
                                 [H](const VectorXd& z) { return H.field.hessian(z); })};
}

/// f(z) = (sum z_i^2 / a_i^2 - 1) / 2 with semi-axes a.
inline DefiningFunctionSurface ellipsoid_surface(int n, const VectorXd& axes) {
    if (axes.size() != 2 * n + 2) throw dimension_error("ellipsoid_surface: need 2n+2 semi-axes");
    const VectorXd inv2 = axes.array().square().inverse().matrix();
    return DefiningFunctionSurface{
        n, ScalarField::analytic(
               [inv2](const VectorXd& z) { return 0.5 * (z.array().square() * inv2.array()).sum() - 0.5; },
               [inv2](const VectorXd& z) { return VectorXd(z.cwiseProduct(inv2)); },
               [inv2](const VectorXd&) { return MatrixXd(inv2.asDiagonal()); })};
}

/// u(xi) = -sqrt(R^2 - |xi|^2) on the ball |xi| < R in R^d; the graph is the
/// lower hemisphere and T u = 1/R at every point.
inline ScalarField hemisphere_graph(int d, double R) {
    return ScalarField::analytic(
        [R](const VectorXd& xi) { return -std::sqrt(R * R - xi.squaredNorm()); },
        [R](const VectorXd& xi) {
            const double w = std::sqrt(R * R - xi.squaredNorm());
            return VectorXd(xi / w);
        },
        [R, d](const VectorXd& xi) {
            const double w = std::sqrt(R * R - xi.squaredNorm());
            return MatrixXd(MatrixXd::Identity(d, d) / w + (xi * xi.transpose()) / (w * w * w));
        });
}

/// u(xi) = -sqrt(R^2 - t^2), depending only on the last coordinate; also
/// satisfies T u = 1/R wherever |t| < R.
inline ScalarField axis_hemisphere_graph(int d, double R) {
    return ScalarField::analytic(
        [R, d](const VectorXd& xi) {
            const double t = xi(d - 1);
            return -std::sqrt(R * R - t * t);
        },
        [R, d](const VectorXd& xi) {
            const double t = xi(d - 1);
            VectorXd g = VectorXd::Zero(d);
            g(d - 1) = t / std::sqrt(R * R - t * t);
            return g;
        },
        [R, d](const VectorXd& xi) {
            const double t = xi(d - 1);
            const double w = std::sqrt(R * R - t * t);
            MatrixXd H = MatrixXd::Zero(d, d);
            H(d - 1, d - 1) = R * R / (w * w * w);
            return H;
        });
}

// surface point samplers (deterministic, driven by the supplied engine)

inline VectorXd sample_sphere_point(int n, double R, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    VectorXd z(2 * n + 2);
    do {
        for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = gauss(rng);
    } while (z.norm() < 1e-8);
    return VectorXd(R * z / z.norm());
}

inline VectorXd sample_cylinder1_point(double R, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI), box(-1.0, 1.0);
    const double th = angle(rng);
    VectorXd z(4);
    z << R * std::cos(th), R * std::sin(th), box(rng), box(rng);
    return z;
}

inline VectorXd sample_cylinder2_point(double R, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI), box(-1.0, 1.0);
    const double th = angle(rng);
    VectorXd z(4);
    z << R * std::cos(th), box(rng), R * std::sin(th), box(rng);
    return z;
}

inline VectorXd sample_ellipsoid_point(const VectorXd& axes, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    VectorXd d(axes.size());
    double s2;
    do {
        for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = gauss(rng);
        s2 = (d.array() / axes.array()).square().sum();
    } while (s2 < 1e-12);
    return VectorXd(d / std::sqrt(s2));
}

}  // namespace charcurv
