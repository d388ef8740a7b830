#pragma once

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "charcurv/catalog.hpp"
#include "charcurv/graph_operator.hpp"
#include "charcurv/grid.hpp"
#include "charcurv/surface.hpp"

namespace charcurv {

struct SolverConfig {
    std::vector<double> eps_schedule = {1.0, 1e-1, 1e-2, 1e-3, 1e-4};
    double theta = 0.7;  // Picard damping
    int max_outer_iterations = 200;
    double residual_tol = 1e-8;
    double linear_tol = 1e-8;  // relative, on the assembled linear systems
    // 0 = auto: 50 * (1 + max boundary-adjacent |Du| of the initial field)
    double gradient_blowup_threshold = 0.0;
    bool laplace_init = true;

    void validate() const {
        if (eps_schedule.empty()) throw std::invalid_argument("SolverConfig: empty eps schedule");
        for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
            if (eps_schedule[i] <= 0.0) throw std::invalid_argument("SolverConfig: eps schedule must be positive");
            if (i > 0 && eps_schedule[i] >= eps_schedule[i - 1])
                throw std::invalid_argument("SolverConfig: eps schedule must be strictly decreasing");
        }
        if (theta <= 0.0 || theta > 1.0) throw std::invalid_argument("SolverConfig: theta must be in (0, 1]");
        if (max_outer_iterations < 1) throw std::invalid_argument("SolverConfig: max_outer_iterations < 1");
        if (residual_tol <= 0.0 || linear_tol <= 0.0)
            throw std::invalid_argument("SolverConfig: tolerances must be positive");
    }
};

enum class StageStatus { converged, max_iterations, diverged, linear_solve_failure };

struct StageRecord {
    double eps = 0.0;
    int iterations = 0;
    double max_residual = std::numeric_limits<double>::infinity();
    double max_grad = 0.0;
    bool converged = false;
    StageStatus status = StageStatus::max_iterations;
};

enum class Diagnosis { converged, gradient_blow_up, max_iterations_reached };

struct SolverReport {
    std::vector<StageRecord> stages;
    Diagnosis diagnosis = Diagnosis::converged;
    double gradient_threshold = 0.0;
};

inline const char* to_string(Diagnosis d) {
    switch (d) {
        case Diagnosis::converged: return "converged";
        case Diagnosis::gradient_blow_up: return "gradient-blow-up";
        case Diagnosis::max_iterations_reached: return "max-iterations";
    }
    return "?";
}

namespace detail {

using SpMat = Eigen::SparseMatrix<double>;

/// Assembles sum_ab M_ab(node) d_ab u = rhs(node) over interior unknowns with
/// Dirichlet data taken from the grid's boundary values. CoeffFn yields the
/// symmetric 3x3 coefficient matrix at an interior node, RhsFn the right side.
template <class CoeffFn, class RhsFn>
void assemble_system(const GridField& g, CoeffFn&& coeff, RhsFn&& rhs_fn, SpMat& A, VectorXd& b) {
    const long N = g.interior_count();
    const double h2 = g.h * g.h;
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(N * 19);
    b = VectorXd::Zero(N);

    for (long r = 0; r < N; ++r) {
        const auto [i, j, l] = g.interior_nodes()[r];
        const Eigen::Matrix3d M = coeff(i, j, l);
        b(r) += rhs_fn(i, j, l);

        auto add = [&](int ii, int jj, int ll, double c) {
            const int col = g.row_of(ii, jj, ll);
            if (col >= 0)
                trips.emplace_back(static_cast<int>(r), col, c);
            else
                b(r) -= c * g.u[g.id(ii, jj, ll)];
        };

        add(i, j, l, -2.0 * (M(0, 0) + M(1, 1) + M(2, 2)) / h2);
        add(i + 1, j, l, M(0, 0) / h2);
        add(i - 1, j, l, M(0, 0) / h2);
        add(i, j + 1, l, M(1, 1) / h2);
        add(i, j - 1, l, M(1, 1) / h2);
        add(i, j, l + 1, M(2, 2) / h2);
        add(i, j, l - 1, M(2, 2) / h2);

        auto cross = [&](int a, int bx, double m) {
            const double c = m / (2.0 * h2);
            int di[3] = {0, 0, 0}, dj[3] = {0, 0, 0};
            di[a] = 1;
            dj[bx] = 1;
            add(i + di[0] + dj[0], j + di[1] + dj[1], l + di[2] + dj[2], c);
            add(i - di[0] - dj[0], j - di[1] - dj[1], l - di[2] - dj[2], c);
            add(i + di[0] - dj[0], j + di[1] - dj[1], l + di[2] - dj[2], -c);
            add(i - di[0] + dj[0], j - di[1] + dj[1], l - di[2] + dj[2], -c);
        };
        cross(0, 1, M(0, 1));
        cross(0, 2, M(0, 2));
        cross(1, 2, M(1, 2));
    }
    A.resize(N, N);
    A.setFromTriplets(trips.begin(), trips.end());
}

inline bool linear_residual_ok(const SpMat& A, const VectorXd& x, const VectorXd& b, double rel_tol) {
    if (!x.allFinite()) return false;
    const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
    return (A * x - b).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

/// Preconditioned BiCGSTAB with a verified residual, falling back to a
/// sparse direct factorization (pattern analyzed once) when the iterative
/// solve misses the tolerance. Returns false when both routes fail.
class HybridLinearSolver {
public:
    bool solve(const SpMat& A, const VectorXd& b, const VectorXd& guess, double rel_tol, VectorXd& x) {
        Eigen::BiCGSTAB<SpMat, Eigen::IncompleteLUT<double>> bicg;
        bicg.preconditioner().setDroptol(1e-4);
        bicg.preconditioner().setFillfactor(10);
        bicg.setTolerance(std::min(1e-12, rel_tol));
        bicg.setMaxIterations(400);
        bicg.compute(A);
        if (bicg.info() == Eigen::Success) {
            x = bicg.solveWithGuess(b, guess);
            if (linear_residual_ok(A, x, b, rel_tol)) return true;
        }
        if (!analyzed_) {
            lu_.analyzePattern(A);
            analyzed_ = true;
        }
        lu_.factorize(A);
        if (lu_.info() != Eigen::Success) return false;
        x = lu_.solve(b);
        return lu_.info() == Eigen::Success && linear_residual_ok(A, x, b, rel_tol);
    }

private:
    Eigen::SparseLU<SpMat> lu_;
    bool analyzed_ = false;
};

/// Fixed-size discrete jet at an interior node (same stencils as
/// discrete_jet, without the dynamic-matrix overhead of the hot loop).
inline void node_jet(const GridField& g, int i, int j, int l, Eigen::Vector3d& p, Eigen::Matrix3d& L) {
    const double h = g.h, h2 = h * h;
    auto U = [&](int a, int b, int c) { return g.u[g.id(a, b, c)]; };
    const double c0 = U(i, j, l);
    p(0) = (U(i + 1, j, l) - U(i - 1, j, l)) / (2 * h);
    p(1) = (U(i, j + 1, l) - U(i, j - 1, l)) / (2 * h);
    p(2) = (U(i, j, l + 1) - U(i, j, l - 1)) / (2 * h);
    L(0, 0) = (U(i + 1, j, l) - 2 * c0 + U(i - 1, j, l)) / h2;
    L(1, 1) = (U(i, j + 1, l) - 2 * c0 + U(i, j - 1, l)) / h2;
    L(2, 2) = (U(i, j, l + 1) - 2 * c0 + U(i, j, l - 1)) / h2;
    L(0, 1) = L(1, 0) =
        (U(i + 1, j + 1, l) - U(i + 1, j - 1, l) - U(i - 1, j + 1, l) + U(i - 1, j - 1, l)) / (4 * h2);
    L(0, 2) = L(2, 0) =
        (U(i + 1, j, l + 1) - U(i + 1, j, l - 1) - U(i - 1, j, l + 1) + U(i - 1, j, l - 1)) / (4 * h2);
    L(1, 2) = L(2, 1) =
        (U(i, j + 1, l + 1) - U(i, j + 1, l - 1) - U(i, j - 1, l + 1) + U(i, j - 1, l - 1)) / (4 * h2);
}

/// F^eps at a node from the fixed-size jet; tr((A + eps I) L) expanded as
/// sigma^T L sigma + eps tr L.
inline double F_eps_node(const Eigen::Vector3d& p, const Eigen::Matrix3d& L, double kval, double eps) {
    const Eigen::Vector3d s(-p(1), p(0), 1.0);
    const double w = 1.0 + p.squaredNorm();
    return -(s.dot(L * s) + eps * L.trace()) / (w * std::sqrt(w)) + kval;
}

}  // namespace detail

inline double max_interior_residual(const GridField& g, const CurvatureSpec& k, double eps) {
    double m = 0.0;
    for (const auto& [i, j, l] : g.interior_nodes()) {
        const GraphJet jet = discrete_jet(g, i, j, l);
        const double F = F_value(g.pos(i, j, l), g.u[g.id(i, j, l)], jet, k, eps);
        m = std::max(m, std::abs(F));
        if (!std::isfinite(F)) return std::numeric_limits<double>::infinity();
    }
    return m;
}

inline double max_interior_gradient(const GridField& g) {
    double m = 0.0;
    for (const auto& [i, j, l] : g.interior_nodes()) m = std::max(m, discrete_gradient_norm(g, i, j, l));
    return m;
}

inline double max_boundary_adjacent_gradient(const GridField& g) {
    double m = 0.0;
    for (const auto& [i, j, l] : g.interior_nodes())
        if (g.is_boundary_adjacent(i, j, l)) m = std::max(m, discrete_gradient_norm(g, i, j, l));
    return m;
}

/// Replaces the grid's data: boundary nodes take phi, interior nodes the
/// boundary mean. Classification is untouched.
inline void reset_boundary_data(GridField& g, const ScalarField& phi) {
    double bsum = 0.0;
    long bcount = 0;
    for (int i = 0; i < g.dims[0]; ++i)
        for (int j = 0; j < g.dims[1]; ++j)
            for (int l = 0; l < g.dims[2]; ++l)
                if (g.node_class(i, j, l) == NodeClass::boundary) {
                    g.u[g.id(i, j, l)] = phi.value(g.pos(i, j, l));
                    bsum += g.u[g.id(i, j, l)];
                    ++bcount;
                }
    const double bmean = bcount > 0 ? bsum / bcount : 0.0;
    for (const auto& [i, j, l] : g.interior_nodes()) g.u[g.id(i, j, l)] = bmean;
}

/// Discrete Laplace solve with the grid's Dirichlet data; used to warm-start
/// the first continuation stage.
inline GridField solve_laplace(GridField g, const SolverConfig& cfg = {}) {
    detail::SpMat A;
    VectorXd b, sol;
    detail::assemble_system(
        g, [](int, int, int) { return Eigen::Matrix3d(Eigen::Matrix3d::Identity()); },
        [](int, int, int) { return 0.0; }, A, b);
    VectorXd guess(g.interior_count());
    for (long r = 0; r < g.interior_count(); ++r) {
        const auto& [i, j, l] = g.interior_nodes()[r];
        guess(r) = g.u[g.id(i, j, l)];
    }
    detail::HybridLinearSolver linear;
    if (!linear.solve(A, b, guess, cfg.linear_tol, sol)) throw std::runtime_error("solve_laplace: solve failed");
    for (long r = 0; r < g.interior_count(); ++r) {
        const auto& [i, j, l] = g.interior_nodes()[r];
        g.u[g.id(i, j, l)] = sol(r);
    }
    return g;
}

/// One regularization stage: damped Picard iteration with frozen
/// coefficients,
///   tr(A^eps(Du^m) D^2 u^{m+1}) = k(x, u^m) (1 + |Du^m|^2)^{3/2},
/// Dirichlet data from the grid. Terminates on max interior |F^eps| <=
/// residual_tol, the iteration cap, residual growth over 5 consecutive
/// iterations, or a linear-solve failure; the outcome is in the record.
inline std::pair<GridField, StageRecord> picard_solve(GridField grid, const CurvatureSpec& k, double eps,
                                                      const SolverConfig& cfg) {
    if (eps <= 0.0) throw std::invalid_argument("picard_solve: eps must be positive");
    cfg.validate();

    StageRecord rec;
    rec.eps = eps;

    const long N = grid.interior_count();
    std::vector<Eigen::Vector3d> P(N);
    std::vector<Eigen::Matrix3d> L(N);

    detail::SpMat A;
    VectorXd b, sol;
    detail::HybridLinearSolver linear;

    double prev_res = std::numeric_limits<double>::infinity();
    int growth_count = 0;
    for (int iter = 0;; ++iter) {
        double res = 0.0;
        for (long r = 0; r < N; ++r) {
            const auto& [i, j, l] = grid.interior_nodes()[r];
            detail::node_jet(grid, i, j, l, P[r], L[r]);
            const double kval = k.k(grid.pos(i, j, l), grid.u[grid.id(i, j, l)]);
            const double F = detail::F_eps_node(P[r], L[r], kval, eps);
            if (!std::isfinite(F)) {
                res = std::numeric_limits<double>::infinity();
                break;
            }
            res = std::max(res, std::abs(F));
        }
        rec.max_residual = res;
        if (!std::isfinite(res)) {
            rec.status = StageStatus::diverged;
            break;
        }
        if (res <= cfg.residual_tol) {
            rec.status = StageStatus::converged;
            rec.converged = true;
            break;
        }
        if (iter >= cfg.max_outer_iterations) {
            rec.status = StageStatus::max_iterations;
            break;
        }
        if (res > prev_res) {
            if (++growth_count >= 5) {
                rec.status = StageStatus::diverged;
                break;
            }
        } else {
            growth_count = 0;
        }
        prev_res = res;

        detail::assemble_system(
            grid,
            [&](int i, int j, int l) {
                const Eigen::Vector3d& p = P[grid.row_of(i, j, l)];
                const Eigen::Vector3d s(-p(1), p(0), 1.0);
                Eigen::Matrix3d M = s * s.transpose();
                M.diagonal().array() += eps;
                return M;
            },
            [&](int i, int j, int l) {
                const double w = 1.0 + P[grid.row_of(i, j, l)].squaredNorm();
                return k.k(grid.pos(i, j, l), grid.u[grid.id(i, j, l)]) * w * std::sqrt(w);
            },
            A, b);

        VectorXd guess(N);
        for (long r = 0; r < N; ++r) {
            const auto& [i, j, l] = grid.interior_nodes()[r];
            guess(r) = grid.u[grid.id(i, j, l)];
        }
        if (!linear.solve(A, b, guess, cfg.linear_tol, sol)) {
            rec.status = StageStatus::linear_solve_failure;
            break;
        }
        for (long r = 0; r < N; ++r) {
            const auto& [i, j, l] = grid.interior_nodes()[r];
            double& v = grid.u[grid.id(i, j, l)];
            v = (1.0 - cfg.theta) * v + cfg.theta * sol(r);
        }
        rec.iterations = iter + 1;
    }
    rec.max_grad = max_interior_gradient(grid);
    return {std::move(grid), rec};
}

/// Warm-started sweep over the eps schedule (the vanishing-viscosity limit).
/// Stage failures are recorded and the sweep continues; only a gradient
/// blow-up stops it early. Diagnosis: gradient-blow-up if the threshold was
/// exceeded at any stage, otherwise max-iterations if any stage failed to
/// converge, otherwise converged.
inline std::pair<GridField, SolverReport> continuation_solve(GridField grid, const CurvatureSpec& k,
                                                             const SolverConfig& cfg) {
    cfg.validate();
    if (cfg.laplace_init) grid = solve_laplace(std::move(grid), cfg);

    SolverReport report;
    report.gradient_threshold = cfg.gradient_blowup_threshold > 0.0
                                    ? cfg.gradient_blowup_threshold
                                    : 50.0 * (1.0 + max_boundary_adjacent_gradient(grid));

    bool all_converged = true;
    for (double eps : cfg.eps_schedule) {
        auto [g, rec] = picard_solve(std::move(grid), k, eps, cfg);
        grid = std::move(g);
        report.stages.push_back(rec);
        if (!(rec.max_grad <= report.gradient_threshold)) {  // also catches NaN
            report.diagnosis = Diagnosis::gradient_blow_up;
            return {std::move(grid), std::move(report)};
        }
        all_converged = all_converged && rec.status == StageStatus::converged;
    }
    report.diagnosis = all_converged ? Diagnosis::converged : Diagnosis::max_iterations_reached;
    return {std::move(grid), std::move(report)};
}

struct ComparisonReport {
    GridField u1, u2;
    SolverReport report1, report2;
    double max_violation = 0.0;  // max over non-exterior nodes of u1 - u2
};

/// Solves the problem for two ordered boundary data and reports the largest
/// violation of u1 <= u2. Requires phi1 <= phi2 on the boundary nodes and k
/// in one of the two comparison regimes.
inline ComparisonReport comparison_experiment(const GridField& geometry, const CurvatureSpec& k,
                                              const ScalarField& phi1, const ScalarField& phi2,
                                              const SolverConfig& cfg) {
    if (k.monotonicity == CurvatureSpec::Monotonicity::general)
        throw std::invalid_argument("comparison_experiment: k must declare a comparison regime");
    std::vector<VectorXd> probes;
    for (const auto& [i, j, l] : geometry.interior_nodes())
        if (probes.size() < 8) probes.push_back(geometry.pos(i, j, l));
    if (!spot_check_monotonicity(k, probes, -2.0, 2.0))
        throw std::invalid_argument("comparison_experiment: k fails its declared monotonicity spot-check");

    GridField g1 = geometry, g2 = geometry;
    reset_boundary_data(g1, phi1);
    reset_boundary_data(g2, phi2);
    for (int i = 0; i < geometry.dims[0]; ++i)
        for (int j = 0; j < geometry.dims[1]; ++j)
            for (int l = 0; l < geometry.dims[2]; ++l)
                if (geometry.node_class(i, j, l) == NodeClass::boundary &&
                    g1.u[g1.id(i, j, l)] > g2.u[g2.id(i, j, l)])
                    throw std::invalid_argument("comparison_experiment: boundary data are not ordered at node (" +
                                                std::to_string(i) + "," + std::to_string(j) + "," +
                                                std::to_string(l) + ")");

    ComparisonReport rep;
    auto [s1, r1] = continuation_solve(std::move(g1), k, cfg);
    auto [s2, r2] = continuation_solve(std::move(g2), k, cfg);
    rep.u1 = std::move(s1);
    rep.u2 = std::move(s2);
    rep.report1 = std::move(r1);
    rep.report2 = std::move(r2);
    double viol = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < geometry.dims[0]; ++i)
        for (int j = 0; j < geometry.dims[1]; ++j)
            for (int l = 0; l < geometry.dims[2]; ++l)
                if (geometry.node_class(i, j, l) != NodeClass::exterior)
                    viol = std::max(viol, rep.u1.u[rep.u1.id(i, j, l)] - rep.u2.u[rep.u2.id(i, j, l)]);
    rep.max_violation = viol;
    return rep;
}

struct GradientBoundReport {
    double interior_max = 0.0;
    double boundary_adjacent_max = 0.0;
    double slack = 0.0;
    bool pass = false;
};

/// Discrete check of the gradient maximum principle: the interior max of
/// |Du| must not exceed the boundary-adjacent max by more than C h.
inline GradientBoundReport gradient_bound_check(const GridField& g, double slack_C = 10.0) {
    GradientBoundReport rep;
    rep.interior_max = max_interior_gradient(g);
    rep.boundary_adjacent_max = max_boundary_adjacent_gradient(g);
    rep.slack = slack_C * g.h;
    rep.pass = rep.interior_max <= rep.boundary_adjacent_max + rep.slack;
    return rep;
}

/// Barrier pair (phi~ + lambda rho, phi~ - lambda rho); both coincide with
/// phi~ on {rho = 0} and sandwich the solution inside for lambda large.
inline std::pair<ScalarField, ScalarField> barrier_pair(const ScalarField& rho, const ScalarField& phi_ext,
                                                        double lambda) {
    if (lambda <= 0.0) throw std::invalid_argument("barrier_pair: lambda must be positive");
    auto combine = [&](double sign) {
        return ScalarField::analytic(
            [rho, phi_ext, lambda, sign](const VectorXd& x) {
                return phi_ext.value(x) + sign * lambda * rho.value(x);
            },
            [rho, phi_ext, lambda, sign](const VectorXd& x) {
                return VectorXd(phi_ext.gradient(x) + sign * lambda * rho.gradient(x));
            },
            [rho, phi_ext, lambda, sign](const VectorXd& x) {
                return MatrixXd(phi_ext.hessian(x) + sign * lambda * rho.hessian(x));
            });
    };
    return {combine(+1.0), combine(-1.0)};
}

struct Ball3 {
    Vector3d center = Vector3d::Zero();
    double radius = 0.0;
};

namespace detail {

inline bool ball_contains(const Ball3& b, const Vector3d& p) {
    return (p - b.center).norm() <= b.radius + 1e-10 * (1.0 + b.radius);
}

inline Ball3 ball_of_two(const Vector3d& a, const Vector3d& b) {
    return {0.5 * (a + b), 0.5 * (a - b).norm()};
}

inline Ball3 circumsphere3(const Vector3d& a, const Vector3d& b, const Vector3d& c) {
    const Vector3d u = b - a, v = c - a;
    Eigen::Matrix2d M;
    M << u.dot(u), u.dot(v), u.dot(v), v.dot(v);
    Eigen::Vector2d rhs(0.5 * u.squaredNorm(), 0.5 * v.squaredNorm());
    if (std::abs(M.determinant()) < 1e-12 * (1.0 + u.squaredNorm() * v.squaredNorm())) {
        Ball3 best = ball_of_two(a, b);
        for (const Ball3& cand : {ball_of_two(a, c), ball_of_two(b, c)})
            if (cand.radius > best.radius) best = cand;
        return best;
    }
    const Eigen::Vector2d ab = M.inverse() * rhs;
    const Vector3d center = a + ab(0) * u + ab(1) * v;
    return {center, (center - a).norm()};
}

inline Ball3 circumsphere4(const Vector3d& a, const Vector3d& b, const Vector3d& c, const Vector3d& d) {
    Eigen::Matrix3d M;
    M.row(0) = 2.0 * (b - a).transpose();
    M.row(1) = 2.0 * (c - a).transpose();
    M.row(2) = 2.0 * (d - a).transpose();
    Vector3d rhs(b.squaredNorm() - a.squaredNorm(), c.squaredNorm() - a.squaredNorm(),
                 d.squaredNorm() - a.squaredNorm());
    Eigen::FullPivLU<Eigen::Matrix3d> lu(M);
    if (!lu.isInvertible()) {
        // coplanar support set: fall back to the best face sphere
        Ball3 best{Vector3d::Zero(), std::numeric_limits<double>::infinity()};
        const Vector3d* pts[4] = {&a, &b, &c, &d};
        for (int skip = 0; skip < 4; ++skip) {
            const Vector3d* q[3];
            int m = 0;
            for (int i = 0; i < 4; ++i)
                if (i != skip) q[m++] = pts[i];
            Ball3 cand = circumsphere3(*q[0], *q[1], *q[2]);
            bool ok = true;
            for (int i = 0; i < 4; ++i) ok = ok && ball_contains(cand, *pts[i]);
            if (ok && cand.radius < best.radius) best = cand;
        }
        if (std::isfinite(best.radius)) return best;
        return circumsphere3(a, b, c);
    }
    const Vector3d center = lu.solve(rhs);
    return {center, (center - a).norm()};
}

}  // namespace detail

/// Exact smallest enclosing ball of a point set (Welzl's incremental
/// algorithm, randomized with a fixed seed for determinism).
inline Ball3 smallest_enclosing_ball(std::vector<Vector3d> pts, std::uint64_t seed = 0x9e3779b97f4a7c15ull) {
    if (pts.empty()) throw std::invalid_argument("smallest_enclosing_ball: empty point set");
    std::mt19937_64 rng(seed);
    std::shuffle(pts.begin(), pts.end(), rng);

    using detail::ball_contains;
    Ball3 ball{pts[0], 0.0};
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (ball_contains(ball, pts[i])) continue;
        ball = Ball3{pts[i], 0.0};
        for (std::size_t j = 0; j < i; ++j) {
            if (ball_contains(ball, pts[j])) continue;
            ball = detail::ball_of_two(pts[i], pts[j]);
            for (std::size_t k = 0; k < j; ++k) {
                if (ball_contains(ball, pts[k])) continue;
                ball = detail::circumsphere3(pts[i], pts[j], pts[k]);
                for (std::size_t m = 0; m < k; ++m) {
                    if (ball_contains(ball, pts[m])) continue;
                    ball = detail::circumsphere4(pts[i], pts[j], pts[k], pts[m]);
                }
            }
        }
    }
    return ball;
}

struct SupBoundReport {
    double sup_interior_abs = 0.0;
    double sup_boundary_abs = 0.0;
    Ball3 enclosing;
    double cap_max = 0.0;  // max of sqrt(R^2 - |x - x0|^2) over grid nodes
    double bound = 0.0;
    double margin = 0.0;
    bool pass = false;
};

/// Checks sup |u| <= sup_boundary |u| + max v with v the spherical cap over
/// the smallest enclosing ball of the discrete domain.
inline SupBoundReport supbound_check(const GridField& g) {
    SupBoundReport rep;
    std::vector<Vector3d> pts;
    for (int i = 0; i < g.dims[0]; ++i)
        for (int j = 0; j < g.dims[1]; ++j)
            for (int l = 0; l < g.dims[2]; ++l) {
                const NodeClass c = g.node_class(i, j, l);
                if (c == NodeClass::exterior) continue;
                pts.push_back(g.pos(i, j, l));
                const double a = std::abs(g.u[g.id(i, j, l)]);
                if (c == NodeClass::interior)
                    rep.sup_interior_abs = std::max(rep.sup_interior_abs, a);
                else
                    rep.sup_boundary_abs = std::max(rep.sup_boundary_abs, a);
            }
    rep.enclosing = smallest_enclosing_ball(pts);
    for (const auto& p : pts) {
        const double arg = rep.enclosing.radius * rep.enclosing.radius - (p - rep.enclosing.center).squaredNorm();
        rep.cap_max = std::max(rep.cap_max, std::sqrt(std::max(0.0, arg)));
    }
    rep.bound = rep.sup_boundary_abs + rep.cap_max;
    rep.margin = rep.bound - rep.sup_interior_abs;
    rep.pass = rep.margin >= -1e-12;
    return rep;
}

struct CounterexampleReport {
    double R = 0.0, h = 0.0;
    double max_Tu_deviation = 0.0;  // |T u - 1/R| over ball interior nodes
    double max_Tv_deviation = 0.0;
    bool u_le_v = true;
    bool equality_iff_axis = true;
    long axis_node_count = 0;
    double du_dnu_at_p = 0.0;  // inner normal derivative at p = 0 of the cut domain
    double dv_dnu_at_p = 0.0;
    bool cut_u_lt_v_away_from_p = true;
    std::string verdict;
};

/// The two explicit graphs u = -sqrt(R^2 - t^2) and v = -sqrt(R^2 - |xi|^2):
/// equal operator value 1/R, ordered with equality on the t-axis, and equal
/// normal derivatives at the touching point of the paraboloid-cut domain.
inline CounterexampleReport counterexample_report(double R, double h) {
    if (R <= 0.0 || h <= 0.0) throw std::invalid_argument("counterexample_report: R and h must be positive");
    if (std::abs(R / h - std::round(R / h)) > 1e-9)
        throw std::invalid_argument("counterexample_report: grid does not resolve the touching axis (R/h not integral)");

    CounterexampleReport rep;
    rep.R = R;
    rep.h = h;
    const ScalarField u = axis_hemisphere_graph(3, R);
    const ScalarField v = hemisphere_graph(3, R);
    const ScalarField zero = ScalarField::from_value_only([](const VectorXd&) { return 0.0; });

    const GridField ball = build_grid(DomainSpec::ball(Vector3d::Zero(), R), h, zero);
    for (const auto& [i, j, l] : ball.interior_nodes()) {
        const Vector3d p = ball.pos(i, j, l);
        const GraphJet ju(u.gradient(p), u.hessian(p));
        const GraphJet jv(v.gradient(p), v.hessian(p));
        rep.max_Tu_deviation = std::max(rep.max_Tu_deviation, std::abs(char_operator_value(ju) - 1.0 / R));
        rep.max_Tv_deviation = std::max(rep.max_Tv_deviation, std::abs(char_operator_value(jv) - 1.0 / R));
    }
    for (int i = 0; i < ball.dims[0]; ++i)
        for (int j = 0; j < ball.dims[1]; ++j)
            for (int l = 0; l < ball.dims[2]; ++l) {
                if (ball.node_class(i, j, l) == NodeClass::exterior) continue;
                const Vector3d p = ball.pos(i, j, l);
                const double uv = u.value(p), vv = v.value(p);
                if (uv > vv) rep.u_le_v = false;
                const bool on_axis = std::abs(p(0)) < h / 2 && std::abs(p(1)) < h / 2;
                if (on_axis) ++rep.axis_node_count;
                if ((uv == vv) != on_axis) rep.equality_iff_axis = false;
            }

    // Hopf setting: Omega = B(0,R) cut by {y^2 + t^2 - x < 0}, touching point p = 0,
    // inner normal nu = (1, 0, 0).
    const ScalarField cut = ScalarField::from_value_only([R](const VectorXd& p) {
        return std::max(0.5 * (p.squaredNorm() - R * R), p(1) * p(1) + p(2) * p(2) - p(0));
    });
    const GridField hopf =
        build_grid(DomainSpec::defined_by(cut, Vector3d(-R, -R, -R), Vector3d(R, R, R)), h, zero);
    for (int i = 0; i < hopf.dims[0]; ++i)
        for (int j = 0; j < hopf.dims[1]; ++j)
            for (int l = 0; l < hopf.dims[2]; ++l) {
                if (hopf.node_class(i, j, l) == NodeClass::exterior) continue;
                const Vector3d p = hopf.pos(i, j, l);
                if (p.norm() < h / 2) continue;  // the touching point itself
                if (u.value(p) >= v.value(p)) rep.cut_u_lt_v_away_from_p = false;
            }
    const Vector3d nu(1.0, 0.0, 0.0);
    rep.du_dnu_at_p = u.gradient(Vector3d::Zero()).dot(nu);
    rep.dv_dnu_at_p = v.gradient(Vector3d::Zero()).dot(nu);
    rep.verdict = (rep.du_dnu_at_p < rep.dv_dnu_at_p) ? "Hopf conclusion holds" : "Hopf conclusion fails";
    return rep;
}

enum class CylinderCondition { satisfied, violated, unchecked };

struct CylinderConditionReport {
    CylinderCondition status = CylinderCondition::unchecked;
    double min_margin = std::numeric_limits<double>::quiet_NaN();  // min over samples of C - sup k
};

/// Checks sup_s k < C^{Omega_c} at sampled boundary points, where Omega_c is
/// the cylinder over the domain boundary; computable for ball and ellipsoid
/// domains, otherwise reported unchecked.
inline CylinderConditionReport cylinder_condition_check(const DomainSpec& domain, const CurvatureSpec& k,
                                                        int samples = 200, std::uint64_t seed = 7) {
    CylinderConditionReport rep;
    if ((domain.kind != DomainSpec::Kind::ball && domain.kind != DomainSpec::Kind::ellipsoid) ||
        std::isnan(k.sup_over_r))
        return rep;
    if (std::isinf(k.sup_over_r)) {  // unbounded k can never lie below the cylinder curvature
        rep.status = CylinderCondition::violated;
        rep.min_margin = -std::numeric_limits<double>::infinity();
        return rep;
    }

    const ScalarField lifted = lift_to_cylinder(domain.defining_function(), 1);
    DefiningFunctionSurface cyl{1, lifted};

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double min_margin = std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s) {
        Vector3d dir;
        do {
            dir = Vector3d(gauss(rng), gauss(rng), gauss(rng));
        } while (dir.norm() < 1e-8);
        Vector3d bp;
        if (domain.kind == DomainSpec::Kind::ball)
            bp = domain.center + domain.radius * dir.normalized();
        else
            bp = domain.center + dir / std::sqrt((dir.array() / domain.axes.array()).square().sum());
        VectorXd z = VectorXd::Zero(4);
        for (int i = 0; i < 3; ++i) z(graph_axis_to_phase(i, 1)) = bp(i);
        min_margin = std::min(min_margin, surface_characteristic_curvature(cyl, z) - k.sup_over_r);
    }
    rep.min_margin = min_margin;
    rep.status = min_margin > 0.0 ? CylinderCondition::satisfied : CylinderCondition::violated;
    return rep;
}

}  // namespace charcurv
