// Acceptance suite: one criterion per block, one [PASS]/[FAIL] line each,
// nonzero exit iff anything failed. Heavier solver criteria share runs.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "charcurv/catalog.hpp"
#include "charcurv/solver.hpp"
#include "charcurv/symplectic.hpp"
#include "charcurv/runner.hpp"

using namespace charcurv;

namespace {

int failures = 0;
std::chrono::steady_clock::time_point t0;

void begin() { t0 = std::chrono::steady_clock::now(); }

void report(int idx, const std::string& name, bool pass, const std::string& detail) {
    const double secs =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count() /
        1000.0;
    std::printf("[%s] %02d %s (%s; %.2f s)\n", pass ? "PASS" : "FAIL", idx, name.c_str(), detail.c_str(),
                secs);
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3g", x);
    return buf;
}

VectorXd random_vec(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    VectorXd v(d);
    for (int i = 0; i < d; ++i) v(i) = gauss(rng);
    return v;
}

MatrixXd random_sym(int d, std::mt19937_64& rng) {
    MatrixXd M(d, d);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) M(i, j) = gauss(rng);
    return 0.5 * (M + M.transpose());
}

double max_error_vs(const GridField& g, const ScalarField& ref) {
    double e = 0.0;
    for (const auto& [i, j, l] : g.interior_nodes())
        e = std::max(e, std::abs(g.u[g.id(i, j, l)] - ref.value(g.pos(i, j, l))));
    return e;
}

}  // namespace

int main() {
    std::mt19937_64 rng(0xC0FFEE);

    {  // 1: sphere curvature over radii and dimensions
        begin();
        double err = 0.0;
        for (int n : {1, 2, 3}) {
            HamiltonianSpec H = sphere_hamiltonian(n);
            for (double R : {0.5, 1.0, 2.0})
                for (int s = 0; s < 50; ++s) {
                    const PhasePoint z(sample_sphere_point(n, R, rng), n);
                    err = std::max(err, std::abs(characteristic_curvature_levelset(H, z) - 1.0 / R));
                }
        }
        report(1, "sphere curvature 1/R", err <= 1e-10, "max err " + fmt(err));
    }

    {  // 2: cylinder dichotomy
        begin();
        HamiltonianSpec H1 = cylinder1_hamiltonian(), H2 = cylinder2_hamiltonian();
        double e1 = 0.0, e2 = 0.0;
        const double R = 1.4;
        for (int s = 0; s < 100; ++s) {
            e1 = std::max(e1, std::abs(characteristic_curvature_levelset(
                                  H1, PhasePoint(sample_cylinder1_point(R, rng), 1))));
            e2 = std::max(e2, std::abs(characteristic_curvature_levelset(
                                  H2, PhasePoint(sample_cylinder2_point(R, rng), 1)) -
                                       1.0 / R));
        }
        report(2, "cylinder dichotomy 0 vs 1/R", e1 <= 1e-10 && e2 <= 1e-10,
               "errs " + fmt(e1) + " / " + fmt(e2));
    }

    {  // 3: algebraic suite for A(p)
        begin();
        double eouter = 0.0, espec = 0.0, enull = 0.0;
        for (int d : {3, 5, 7}) {
            const int n = (d - 1) / 2;
            for (int s = 0; s < 10000; ++s) {
                const VectorXd p = random_vec(d, rng);
                const VectorXd ux = p.head(n), uy = p.segment(n, n);
                const MatrixXd A = assemble_A(p);
                MatrixXd B(d, d);
                B.topLeftCorner(n, n) = uy * uy.transpose();
                B.block(0, n, n, n) = -uy * ux.transpose();
                B.block(0, 2 * n, n, 1) = -uy;
                B.block(n, 0, n, n) = -ux * uy.transpose();
                B.block(n, n, n, n) = ux * ux.transpose();
                B.block(n, 2 * n, n, 1) = ux;
                B.block(2 * n, 0, 1, n) = -uy.transpose();
                B.block(2 * n, n, 1, n) = ux.transpose();
                B(2 * n, 2 * n) = 1.0;
                eouter = std::max(eouter, (A - B).cwiseAbs().maxCoeff());

                Eigen::SelfAdjointEigenSolver<MatrixXd> eig(A);
                VectorXd expected = VectorXd::Zero(d);
                expected(d - 1) = 1.0 + ux.squaredNorm() + uy.squaredNorm();
                espec = std::max(espec, (eig.eigenvalues() - expected).cwiseAbs().maxCoeff());

                for (const auto& v : null_eigenvectors(p))
                    enull = std::max(enull, (A * v).cwiseAbs().maxCoeff() / (1.0 + std::pow(p.norm(), 3)));
            }
        }
        report(3, "A = sigma sigma^T, spectrum, kernel", eouter <= 1e-15 && espec <= 1e-10 && enull <= 1e-12,
               "outer " + fmt(eouter) + ", spec " + fmt(espec) + ", null " + fmt(enull));
    }

    {  // 4: n = 1 expansion equivalence
        begin();
        double err = 0.0;
        for (int s = 0; s < 10000; ++s) {
            const GraphJet jet(random_vec(3, rng), random_sym(3, rng));
            err = std::max(err, std::abs(char_operator_value(jet) - char_operator_n1(jet)));
        }
        report(4, "n=1 expansion vs trace form", err <= 1e-12, "max err " + fmt(err));
    }

    {  // 5: curvature relation, analytic and finite-difference jets
        begin();
        double eana = 0.0;
        for (int n : {1, 2})
            for (double R : {0.5, 1.0, 2.0}) {
                DefiningFunctionSurface S = sphere_surface(n, R);
                for (int s = 0; s < 10; ++s)
                    eana = std::max(eana,
                                    std::abs(curvature_relation_residual(S, sample_sphere_point(n, R, rng))));
            }
        for (double R : {0.5, 1.0, 2.0}) {
            DefiningFunctionSurface c1 = cylinder1_surface(R), c2 = cylinder2_surface(R);
            for (int s = 0; s < 10; ++s) {
                eana = std::max(eana, std::abs(curvature_relation_residual(c1, sample_cylinder1_point(R, rng))));
                eana = std::max(eana, std::abs(curvature_relation_residual(c2, sample_cylinder2_point(R, rng))));
            }
        }
        std::uniform_real_distribution<double> ax(0.6, 1.8);
        double efd = 0.0;
        for (int s = 0; s < 100; ++s) {
            const int n = 1 + (s % 2);
            VectorXd axes(2 * n + 2);
            for (Eigen::Index i = 0; i < axes.size(); ++i) axes(i) = ax(rng);
            DefiningFunctionSurface E = ellipsoid_surface(n, axes);
            const VectorXd z = sample_ellipsoid_point(axes, rng);
            eana = std::max(eana, std::abs(curvature_relation_residual(E, z)));

            const ScalarField analytic = E.f;
            DefiningFunctionSurface Efd{
                n, ScalarField::from_value_only([analytic](const VectorXd& w) { return analytic.value(w); },
                                                1e-5)};
            efd = std::max(efd, std::abs(curvature_relation_residual(Efd, z)));
        }
        report(5, "curvature relation (2n+1)H = 2nL + C", eana <= 1e-10 && efd <= 1e-6,
               "analytic " + fmt(eana) + ", fd " + fmt(efd));
    }

    {  // 6: trajectory closure, energy, curvature
        begin();
        const double R = 1.37;
        HamiltonianSpec H = sphere_hamiltonian(1);
        VectorXd z0(4);
        z0 << R, 0, 0, 0;
        const Trajectory traj = integrate_characteristic_curve(H, PhasePoint(z0, 1), 2.0 * M_PI, 1e-3);
        const double closure = (traj.states.back().coords - z0).norm();
        double oracle = 0.0;  // closed form of xdot = y, ydot = -x
        for (std::size_t s = 0; s < traj.size(); s += 7) {
            const double t = traj.times[s];
            const VectorXd& z = traj.states[s].coords;
            oracle = std::max({oracle, std::abs(z(0) - R * std::cos(t)), std::abs(z(2) + R * std::sin(t)),
                               std::abs(z(1)), std::abs(z(3))});
        }
        double curverr = 0.0;
        for (double c : curvature_along_curve(H, traj)) curverr = std::max(curverr, std::abs(c - 1.0 / R));
        const bool pass = closure <= 1e-6 && traj.max_energy_drift <= 1e-8 && curverr <= 1e-8 && oracle <= 1e-6;
        report(6, "sphere orbit closure/energy/curvature", pass,
               "closure " + fmt(closure) + ", drift " + fmt(traj.max_energy_drift) + ", curv " + fmt(curverr));
    }

    SolverConfig sc;  // defaults: schedule {1,...,1e-4}, theta 0.7, tol 1e-8
    sc.max_outer_iterations = 250;

    {  // 7: solver exactness on affine data
        begin();
        Vector3d a(2.0, -1.0, 0.5);
        ScalarField phi = ScalarField::analytic(
            [a](const VectorXd& x) { return a.dot(x) + 0.25; }, [a](const VectorXd&) { return VectorXd(a); },
            [](const VectorXd&) { return MatrixXd(MatrixXd::Zero(3, 3)); });
        GridField g = build_grid(DomainSpec::box(Vector3d::Zero(), Vector3d::Ones()), 1.0 / 16.0, phi);
        auto [field, rep] = continuation_solve(std::move(g), constant_k(0.0), sc);
        const double err = max_error_vs(field, phi);
        report(7, "affine data solved exactly", rep.diagnosis == Diagnosis::converged && err <= 1e-8,
               "max err " + fmt(err));
    }

    GridField hemi_field;  // shared by criteria 8, 10, 11
    bool hemi_converged = false;
    SolverReport hemi_report;

    {  // 8: hemisphere recovery with Richardson pair
        begin();
        const ScalarField exact = hemisphere_graph(3, 2.0);
        const CurvatureSpec k = constant_k(0.5);

        GridField coarse = build_grid(DomainSpec::ball(Vector3d::Zero(), 1.0), 1.0 / 8.0, exact);
        auto [cf, crep] = continuation_solve(std::move(coarse), k, sc);
        const double err_coarse = max_error_vs(cf, exact);

        GridField fine = build_grid(DomainSpec::ball(Vector3d::Zero(), 1.0), 1.0 / 16.0, exact);
        auto [ff, frep] = continuation_solve(std::move(fine), k, sc);
        const double err_fine = max_error_vs(ff, exact);
        hemi_field = ff;
        hemi_report = frep;
        hemi_converged = frep.diagnosis == Diagnosis::converged;

        const bool pass = crep.diagnosis == Diagnosis::converged && hemi_converged && err_fine <= 5e-2 &&
                          err_fine < err_coarse;
        report(8, "hemisphere recovery (h = 1/16, Richardson vs 1/8)", pass,
               "err(1/8) " + fmt(err_coarse) + ", err(1/16) " + fmt(err_fine));
    }

    {  // 9: comparison principle and shift invariance
        begin();
        auto phi1 = ScalarField::from_value_only([](const VectorXd& x) {
            return 0.3 * std::sin(M_PI * x(0)) * std::cos(M_PI * x(1)) + 0.2 * x(2);
        });
        auto phi2 = ScalarField::from_value_only([](const VectorXd& x) {
            return 0.3 * std::sin(M_PI * x(0)) * std::cos(M_PI * x(1)) + 0.2 * x(2) + 0.25 +
                   0.1 * std::sin(M_PI * x(2)) * std::sin(M_PI * x(2));
        });
        GridField g = build_grid(DomainSpec::box(Vector3d::Zero(), Vector3d::Ones()), 1.0 / 16.0, phi1);
        const CurvatureSpec k = constant_k(0.1);
        SolverConfig sc9 = sc;
        sc9.theta = 0.5;  // the steep trig data cycles under the default damping
        const ComparisonReport ordered = comparison_experiment(g, k, phi1, phi2, sc9);

        auto phi1c = ScalarField::from_value_only([phi1](const VectorXd& x) { return phi1.value(x) + 0.8; });
        const ComparisonReport shifted = comparison_experiment(g, k, phi1, phi1c, sc9);
        double shift_err = 0.0;
        for (const auto& [i, j, l] : shifted.u1.interior_nodes())
            shift_err = std::max(shift_err, std::abs(shifted.u2.u[shifted.u2.id(i, j, l)] -
                                                     shifted.u1.u[shifted.u1.id(i, j, l)] - 0.8));
        const bool pass = ordered.report1.diagnosis == Diagnosis::converged &&
                          ordered.report2.diagnosis == Diagnosis::converged &&
                          ordered.max_violation <= 1e-8 && shift_err <= 1e-8;
        report(9, "comparison principle + shift test", pass,
               "violation " + fmt(ordered.max_violation) + ", shift err " + fmt(shift_err));
    }

    {  // 10: non-existence surrogate on the unit ball
        begin();
        ScalarField zero = ScalarField::from_value_only([](const VectorXd&) { return 0.0; });
        GridField g = build_grid(DomainSpec::ball(Vector3d::Zero(), 1.0), 1.0 / 8.0, zero);
        SolverConfig probe = sc;  // halving schedule resolves the gradient growth
        probe.eps_schedule.clear();
        for (double eps = 1.0; eps > 1.22e-4; eps *= 0.5) probe.eps_schedule.push_back(eps);
        probe.eps_schedule.push_back(1e-4);
        probe.max_outer_iterations = 60;  // failing stages are recorded, not retried to exhaustion
        auto [field, rep] = continuation_solve(std::move(g), constant_k(2.0), probe);

        bool increasing = rep.stages.size() >= 3;
        if (increasing) {
            const auto& st = rep.stages;
            const std::size_t m = st.size();
            increasing = st[m - 3].max_grad < st[m - 2].max_grad && st[m - 2].max_grad < st[m - 1].max_grad;
        }
        std::string grads;
        for (const auto& st : rep.stages) grads += fmt(st.max_grad) + " ";
        const bool pass = rep.diagnosis == Diagnosis::gradient_blow_up && increasing && hemi_converged;
        report(10, "non-existence surrogate (kR > 1 blows up, kR < 1 converges)", pass,
               "k=2 grads: " + grads + "| k=0.5 " + std::string(to_string(hemi_report.diagnosis)));
    }

    {  // 11: gradient maximum principle on the converged hemisphere run
        begin();
        const GradientBoundReport gb = gradient_bound_check(hemi_field, 10.0);
        const bool pass = hemi_converged && gb.interior_max <= gb.boundary_adjacent_max + 10.0 * hemi_field.h;
        report(11, "gradient maximum principle (C = 10)", pass,
               "interior " + fmt(gb.interior_max) + " vs boundary " + fmt(gb.boundary_adjacent_max) +
                   " + " + fmt(gb.slack));
    }

    {  // 12: the two counterexample graphs
        begin();
        const CounterexampleReport rep = counterexample_report(1.0, 1.0 / 16.0);
        const bool pass = rep.max_Tu_deviation <= 1e-10 && rep.max_Tv_deviation <= 1e-10 && rep.u_le_v &&
                          rep.equality_iff_axis && rep.du_dnu_at_p == 0.0 && rep.dv_dnu_at_p == 0.0 &&
                          rep.cut_u_lt_v_away_from_p && rep.verdict == "Hopf conclusion fails";
        report(12, "strong comparison and Hopf counterexamples", pass,
               "Tu dev " + fmt(rep.max_Tu_deviation) + ", Tv dev " + fmt(rep.max_Tv_deviation) +
                   ", dnu " + fmt(rep.du_dnu_at_p) + "/" + fmt(rep.dv_dnu_at_p));
    }

    if (failures == 0)
        std::printf("all acceptance criteria passed\n");
    else
        std::printf("%d acceptance criteria FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}
