#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "charcurv/graph_operator.hpp"
#include "charcurv/scalar_field.hpp"
#include "charcurv/types.hpp"

namespace charcurv {

using Eigen::Vector3d;

/// Bounded computational domain in R^3 (n = 1 graph coordinates x, y, t).
struct DomainSpec {
    enum class Kind { box, ball, ellipsoid, defining_function };

    Kind kind = Kind::ball;
    Vector3d lo = Vector3d::Zero(), hi = Vector3d::Ones();  // box / bounding box
    Vector3d center = Vector3d::Zero();
    double radius = 1.0;
    Vector3d axes = Vector3d::Ones();
    ScalarField rho;  // defining function, interior = {rho < 0}

    static DomainSpec box(const Vector3d& lo, const Vector3d& hi) {
        DomainSpec d;
        d.kind = Kind::box;
        d.lo = lo;
        d.hi = hi;
        return d;
    }
    static DomainSpec ball(const Vector3d& center, double R) {
        DomainSpec d;
        d.kind = Kind::ball;
        d.center = center;
        d.radius = R;
        d.lo = center.array() - R;
        d.hi = center.array() + R;
        return d;
    }
    static DomainSpec ellipsoid(const Vector3d& center, const Vector3d& axes) {
        DomainSpec d;
        d.kind = Kind::ellipsoid;
        d.center = center;
        d.axes = axes;
        d.lo = center - axes;
        d.hi = center + axes;
        return d;
    }
    static DomainSpec defined_by(ScalarField rho, const Vector3d& lo, const Vector3d& hi) {
        DomainSpec d;
        d.kind = Kind::defining_function;
        d.rho = std::move(rho);
        d.lo = lo;
        d.hi = hi;
        return d;
    }

    /// Closed membership test (boundary points count as inside).
    bool contains(const Vector3d& p) const {
        const double tol = 1e-12;
        switch (kind) {
            case Kind::box:
                return (p.array() >= lo.array() - tol).all() && (p.array() <= hi.array() + tol).all();
            case Kind::ball:
                return (p - center).norm() <= radius + tol;
            case Kind::ellipsoid:
                return ((p - center).array() / axes.array()).square().sum() <= 1.0 + tol;
            case Kind::defining_function:
                return rho.value(p) <= tol;
        }
        return false;
    }

    /// The defining function as a scalar field (analytic for the shape kinds).
    ScalarField defining_function() const {
        switch (kind) {
            case Kind::ball: {
                const Vector3d c = center;
                const double R = radius;
                return ScalarField::analytic(
                    [c, R](const VectorXd& p) { return 0.5 * ((p - c).squaredNorm() - R * R); },
                    [c](const VectorXd& p) { return VectorXd(p - c); },
                    [](const VectorXd&) { return MatrixXd(MatrixXd::Identity(3, 3)); });
            }
            case Kind::ellipsoid: {
                const Vector3d c = center;
                const Vector3d inv2 = axes.array().square().inverse();
                return ScalarField::analytic(
                    [c, inv2](const VectorXd& p) {
                        return 0.5 * (((p - c).array().square() * inv2.array()).sum() - 1.0);
                    },
                    [c, inv2](const VectorXd& p) { return VectorXd((p - c).cwiseProduct(inv2)); },
                    [inv2](const VectorXd&) { return MatrixXd(inv2.asDiagonal()); });
            }
            case Kind::defining_function:
                return rho;
            case Kind::box:
                throw std::invalid_argument("defining_function: a box has no C^2 defining function");
        }
        throw std::logic_error("unreachable");
    }
};

enum class NodeClass : std::uint8_t { exterior = 0, boundary = 1, interior = 2 };

namespace detail {

/// Stencil offsets used by the discrete jet: 6 axis neighbors plus the 12
/// in-plane diagonals for the cross derivatives.
inline const std::array<std::array<int, 3>, 18>& jet_stencil_offsets() {
    static const std::array<std::array<int, 3>, 18> offs = {{{1, 0, 0},
                                                             {-1, 0, 0},
                                                             {0, 1, 0},
                                                             {0, -1, 0},
                                                             {0, 0, 1},
                                                             {0, 0, -1},
                                                             {1, 1, 0},
                                                             {1, -1, 0},
                                                             {-1, 1, 0},
                                                             {-1, -1, 0},
                                                             {1, 0, 1},
                                                             {1, 0, -1},
                                                             {-1, 0, 1},
                                                             {-1, 0, -1},
                                                             {0, 1, 1},
                                                             {0, 1, -1},
                                                             {0, -1, 1},
                                                             {0, -1, -1}}};
    return offs;
}

}  // namespace detail

/// Axis-aligned lattice over a bounded domain with per-node classification
/// and values. Interior nodes have their whole jet stencil available.
class GridField {
public:
    Vector3d origin = Vector3d::Zero();
    double h = 0.0;
    std::array<int, 3> dims = {0, 0, 0};
    std::vector<NodeClass> cls;
    std::vector<double> u;

    long id(int i, int j, int l) const { return (static_cast<long>(i) * dims[1] + j) * dims[2] + l; }
    Vector3d pos(int i, int j, int l) const { return origin + h * Vector3d(i, j, l); }
    bool in_bounds(int i, int j, int l) const {
        return i >= 0 && i < dims[0] && j >= 0 && j < dims[1] && l >= 0 && l < dims[2];
    }
    NodeClass node_class(int i, int j, int l) const { return cls[id(i, j, l)]; }

    long node_count() const { return static_cast<long>(dims[0]) * dims[1] * dims[2]; }

    const std::vector<std::array<int, 3>>& interior_nodes() const { return interior_; }
    long interior_count() const { return static_cast<long>(interior_.size()); }
    /// Row of an interior node in the linear systems, -1 otherwise.
    int row_of(int i, int j, int l) const { return row_[id(i, j, l)]; }

    /// True for interior nodes with at least one boundary node among the six
    /// axis neighbors.
    bool is_boundary_adjacent(int i, int j, int l) const {
        static const int ax[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
        if (node_class(i, j, l) != NodeClass::interior) return false;
        for (const auto& o : ax)
            if (node_class(i + o[0], j + o[1], l + o[2]) == NodeClass::boundary) return true;
        return false;
    }

    void finalize_classification() {
        interior_.clear();
        row_.assign(node_count(), -1);
        for (int i = 0; i < dims[0]; ++i)
            for (int j = 0; j < dims[1]; ++j)
                for (int l = 0; l < dims[2]; ++l)
                    if (cls[id(i, j, l)] == NodeClass::interior) {
                        row_[id(i, j, l)] = static_cast<int>(interior_.size());
                        interior_.push_back({i, j, l});
                    }
    }

private:
    std::vector<std::array<int, 3>> interior_;
    std::vector<int> row_;
};

/// Builds the lattice for a domain: nodes inside the closed domain whose full
/// jet stencil stays inside are interior; the remaining inside nodes are
/// boundary and carry phi; everything else is exterior. Interior values start
/// at the mean of the boundary data.
inline GridField build_grid(const DomainSpec& domain, double h, const ScalarField& phi) {
    if (h <= 0.0) throw std::invalid_argument("build_grid: h must be positive");

    GridField g;
    g.h = h;
    for (int a = 0; a < 3; ++a) {
        const double extent = domain.hi(a) - domain.lo(a);
        int count = static_cast<int>(std::ceil(extent / h - 1e-9)) + 1;
        g.dims[a] = count;
    }
    g.origin = domain.lo;

    const long N = g.node_count();
    std::vector<std::uint8_t> inside(N, 0);
    for (int i = 0; i < g.dims[0]; ++i)
        for (int j = 0; j < g.dims[1]; ++j)
            for (int l = 0; l < g.dims[2]; ++l)
                inside[g.id(i, j, l)] = domain.contains(g.pos(i, j, l)) ? 1 : 0;

    g.cls.assign(N, NodeClass::exterior);
    for (int i = 0; i < g.dims[0]; ++i)
        for (int j = 0; j < g.dims[1]; ++j)
            for (int l = 0; l < g.dims[2]; ++l) {
                if (!inside[g.id(i, j, l)]) continue;
                bool full_stencil = true;
                for (const auto& o : detail::jet_stencil_offsets()) {
                    const int ii = i + o[0], jj = j + o[1], ll = l + o[2];
                    if (!g.in_bounds(ii, jj, ll) || !inside[g.id(ii, jj, ll)]) {
                        full_stencil = false;
                        break;
                    }
                }
                g.cls[g.id(i, j, l)] = full_stencil ? NodeClass::interior : NodeClass::boundary;
            }
    g.finalize_classification();

    if (g.interior_count() == 0) throw std::invalid_argument("build_grid: h too coarse, no interior nodes");

    g.u.assign(N, 0.0);
    double bsum = 0.0;
    long bcount = 0;
    for (int i = 0; i < g.dims[0]; ++i)
        for (int j = 0; j < g.dims[1]; ++j)
            for (int l = 0; l < g.dims[2]; ++l)
                if (g.cls[g.id(i, j, l)] == NodeClass::boundary) {
                    g.u[g.id(i, j, l)] = phi.value(g.pos(i, j, l));
                    bsum += g.u[g.id(i, j, l)];
                    ++bcount;
                }
    const double bmean = bcount > 0 ? bsum / bcount : 0.0;
    for (const auto& node : g.interior_nodes()) g.u[g.id(node[0], node[1], node[2])] = bmean;
    return g;
}

/// Second-order central/cross differences of the grid values at an interior
/// node; exact on affine and quadratic fields restricted to the lattice.
inline GraphJet discrete_jet(const GridField& g, int i, int j, int l) {
    if (g.node_class(i, j, l) != NodeClass::interior)
        throw std::invalid_argument("discrete_jet: node is not interior");
    const double h = g.h, h2 = h * h;
    auto U = [&](int a, int b, int c) { return g.u[g.id(a, b, c)]; };
    const double c0 = U(i, j, l);

    VectorXd p(3);
    p(0) = (U(i + 1, j, l) - U(i - 1, j, l)) / (2 * h);
    p(1) = (U(i, j + 1, l) - U(i, j - 1, l)) / (2 * h);
    p(2) = (U(i, j, l + 1) - U(i, j, l - 1)) / (2 * h);

    MatrixXd L(3, 3);
    L(0, 0) = (U(i + 1, j, l) - 2 * c0 + U(i - 1, j, l)) / h2;
    L(1, 1) = (U(i, j + 1, l) - 2 * c0 + U(i, j - 1, l)) / h2;
    L(2, 2) = (U(i, j, l + 1) - 2 * c0 + U(i, j, l - 1)) / h2;
    L(0, 1) = L(1, 0) =
        (U(i + 1, j + 1, l) - U(i + 1, j - 1, l) - U(i - 1, j + 1, l) + U(i - 1, j - 1, l)) / (4 * h2);
    L(0, 2) = L(2, 0) =
        (U(i + 1, j, l + 1) - U(i + 1, j, l - 1) - U(i - 1, j, l + 1) + U(i - 1, j, l - 1)) / (4 * h2);
    L(1, 2) = L(2, 1) =
        (U(i, j + 1, l + 1) - U(i, j + 1, l - 1) - U(i, j - 1, l + 1) + U(i, j - 1, l - 1)) / (4 * h2);
    return GraphJet(p, L);
}

/// Central-difference gradient magnitude at an interior node.
inline double discrete_gradient_norm(const GridField& g, int i, int j, int l) {
    const double h = g.h;
    auto U = [&](int a, int b, int c) { return g.u[g.id(a, b, c)]; };
    const double px = (U(i + 1, j, l) - U(i - 1, j, l)) / (2 * h);
    const double py = (U(i, j + 1, l) - U(i, j - 1, l)) / (2 * h);
    const double pt = (U(i, j, l + 1) - U(i, j, l - 1)) / (2 * h);
    return std::sqrt(px * px + py * py + pt * pt);
}

}  // namespace charcurv
