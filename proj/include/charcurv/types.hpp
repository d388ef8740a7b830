#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace charcurv {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Thrown when vector/matrix sizes do not match the expected phase-space
/// or graph-space layout.
struct dimension_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Thrown when an operation requires a noncritical point of a scalar field
/// (|gradient| above the configured tolerance) and the input fails that.
struct critical_point_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when a trajectory integration violates its energy-drift contract.
struct integration_error : std::runtime_error {
    integration_error(const std::string& what, long step) : std::runtime_error(what), step(step) {}
    long step;
};

/// Thrown when a vector passed as "tangent" is not tangent within tolerance.
struct tangency_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A point z = (x, y) in R^{2n+2}; the first n+1 entries are the x block,
/// the last n+1 the y block.
struct PhasePoint {
    VectorXd coords;
    int n = 1;

    PhasePoint() = default;
    PhasePoint(VectorXd z, int n_) : coords(std::move(z)), n(n_) {
        if (n < 1 || coords.size() != 2 * n + 2)
            throw dimension_error("PhasePoint: coords length must be 2n+2 with n >= 1");
    }

    int dim() const { return static_cast<int>(coords.size()); }
};

/// Value, gradient and symmetric Hessian of a scalar field at one point.
struct Jet2 {
    double value = 0.0;
    VectorXd gradient;
    MatrixXd hessian;
};

/// Discrete orbit of a Hamiltonian vector field.
struct Trajectory {
    std::vector<double> times;       // strictly increasing, starts at 0
    std::vector<PhasePoint> states;  // same length as times, common n
    double energy = 0.0;             // H at the initial state
    double max_energy_drift = 0.0;   // max |H(state) - energy| observed

    std::size_t size() const { return times.size(); }
};

}  // namespace charcurv
