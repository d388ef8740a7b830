#pragma once

#include <cmath>
#include <string>

#include "charcurv/scalar_field.hpp"
#include "charcurv/types.hpp"

namespace charcurv {

/// Action of the canonical symplectic matrix: J(x, y) = (y, -x).
inline VectorXd apply_J(const VectorXd& v) {
    if (v.size() < 4 || v.size() % 2 != 0)
        throw dimension_error("apply_J: vector length must be even and >= 4");
    const auto m = v.size() / 2;
    VectorXd r(v.size());
    r.head(m) = v.tail(m);
    r.tail(m) = -v.head(m);
    return r;
}

/// Liouville 1-form at z applied to v: lambda(v) = (1/2) <J z, v>.
inline double liouville_form(const PhasePoint& z, const VectorXd& v) {
    if (v.size() != z.coords.size())
        throw dimension_error("liouville_form: vector does not match point dimension");
    return 0.5 * apply_J(z.coords).dot(v);
}

/// Canonical symplectic 2-form, omega(v, u) = <J v, u>; with this sign
/// omega(v, J u) = <v, u>.
inline double symplectic_form(const VectorXd& v, const VectorXd& u) {
    if (v.size() != u.size())
        throw dimension_error("symplectic_form: arguments must have equal dimension");
    return apply_J(v).dot(u);
}

/// The Hamiltonian vector field X^H = J grad H, tangent to level sets of H.
inline VectorXd hamiltonian_vector_field(const HamiltonianSpec& H, const PhasePoint& z) {
    if (z.dim() != H.dim()) throw dimension_error("hamiltonian_vector_field: point/Hamiltonian dimension mismatch");
    return apply_J(H.field.gradient(z.coords));
}

/// Characteristic curvature of the level set of H through z:
///   C = <D^2H J grad H, J grad H> / |grad H|^3.
inline double characteristic_curvature_levelset(const HamiltonianSpec& H, const PhasePoint& z) {
    if (z.dim() != H.dim())
        throw dimension_error("characteristic_curvature_levelset: point/Hamiltonian dimension mismatch");
    const VectorXd g = H.field.gradient(z.coords);
    const double gn = g.norm();
    if (gn <= H.critical_tol)
        throw critical_point_error("critical point of H: |grad H| = " + std::to_string(gn));
    const VectorXd xh = apply_J(g);
    return xh.dot(H.field.hessian(z.coords) * xh) / (gn * gn * gn);
}

/// Fixed-step classical 4th-order integration of zdot = J grad H(z).
/// Energy drift beyond drift_tol (default 1e-6 * max(1, |E|)) aborts with
/// the offending step; the observed maximum drift is recorded either way.
inline Trajectory integrate_characteristic_curve(const HamiltonianSpec& H, const PhasePoint& z0,
                                                 double t_end, double dt, double drift_tol = -1.0) {
    if (dt <= 0.0 || t_end <= 0.0)
        throw std::invalid_argument("integrate_characteristic_curve: dt and t_end must be positive");
    if (z0.dim() != H.dim())
        throw dimension_error("integrate_characteristic_curve: point/Hamiltonian dimension mismatch");
    if (H.field.gradient(z0.coords).norm() <= H.critical_tol)
        throw critical_point_error("critical point of H at the initial state");

    const double energy = H.field.value(z0.coords);
    if (drift_tol < 0.0) drift_tol = 1e-6 * std::max(1.0, std::abs(energy));

    auto rhs = [&H](const VectorXd& z) { return apply_J(H.field.gradient(z)); };

    Trajectory traj;
    traj.energy = energy;
    traj.times.push_back(0.0);
    traj.states.push_back(z0);

    VectorXd z = z0.coords;
    double t = 0.0;
    long step = 0;
    while (t < t_end - 1e-14 * t_end) {
        const double h = std::min(dt, t_end - t);
        const VectorXd k1 = rhs(z);
        const VectorXd k2 = rhs(z + (0.5 * h) * k1);
        const VectorXd k3 = rhs(z + (0.5 * h) * k2);
        const VectorXd k4 = rhs(z + h * k3);
        z += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += h;
        ++step;

        const double drift = std::abs(H.field.value(z) - energy);
        traj.max_energy_drift = std::max(traj.max_energy_drift, drift);
        if (drift > drift_tol)
            throw integration_error("energy drift " + std::to_string(drift) + " exceeded tolerance at step " +
                                        std::to_string(step),
                                    step);

        traj.times.push_back(t);
        traj.states.emplace_back(z, z0.n);
    }
    return traj;
}

/// Characteristic curvature along an integrated orbit, evaluated from the
/// analytic jets of H at each state: with gdot = J grad H and
/// gddot = J D^2H gdot,  C = <gddot, J gdot> / |gdot|^3.
inline std::vector<double> curvature_along_curve(const HamiltonianSpec& H, const Trajectory& traj) {
    std::vector<double> out;
    out.reserve(traj.states.size());
    for (const auto& state : traj.states) {
        const VectorXd g = H.field.gradient(state.coords);
        const double gn = g.norm();
        if (gn <= H.critical_tol) throw critical_point_error("critical point of H along the trajectory");
        const VectorXd vel = apply_J(g);
        const VectorXd acc = apply_J(H.field.hessian(state.coords) * vel);
        out.push_back(acc.dot(apply_J(vel)) / (gn * gn * gn));
    }
    return out;
}

}  // namespace charcurv
