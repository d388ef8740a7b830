#pragma once

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "charcurv/catalog.hpp"
#include "charcurv/config.hpp"
#include "charcurv/csv.hpp"
#include "charcurv/solver.hpp"
#include "charcurv/symplectic.hpp"

namespace charcurv {

// cli_io: materialization of configs into library objects and the
// subcommand drivers. All drivers write CSV to streams so outputs are
// testable and bit-reproducible.

inline HamiltonianSpec hamiltonian_from(const RunConfig& cfg, int n) {
    if (cfg.surface_kind == "sphere") return sphere_hamiltonian(n);
    if (cfg.surface_kind == "cylinder1") return cylinder1_hamiltonian();
    if (cfg.surface_kind == "cylinder2") return cylinder2_hamiltonian();
    throw config_error("surface.kind '" + cfg.surface_kind + "' has no Hamiltonian form");
}

inline DefiningFunctionSurface surface_from(const RunConfig& cfg) {
    if (cfg.surface_kind == "sphere") return sphere_surface(cfg.surface_n, cfg.surface_R);
    if (cfg.surface_kind == "cylinder1") return cylinder1_surface(cfg.surface_R);
    if (cfg.surface_kind == "cylinder2") return cylinder2_surface(cfg.surface_R);
    VectorXd axes = Eigen::Map<const VectorXd>(cfg.surface_axes.data(), cfg.surface_axes.size());
    return ellipsoid_surface(cfg.surface_n, axes);
}

inline VectorXd sample_surface_point(const RunConfig& cfg, std::mt19937_64& rng) {
    if (cfg.surface_kind == "sphere") return sample_sphere_point(cfg.surface_n, cfg.surface_R, rng);
    if (cfg.surface_kind == "cylinder1") return sample_cylinder1_point(cfg.surface_R, rng);
    if (cfg.surface_kind == "cylinder2") return sample_cylinder2_point(cfg.surface_R, rng);
    VectorXd axes = Eigen::Map<const VectorXd>(cfg.surface_axes.data(), cfg.surface_axes.size());
    return sample_ellipsoid_point(axes, rng);
}

inline DomainSpec domain_from(const RunConfig& cfg) {
    const Vector3d c(cfg.domain_center[0], cfg.domain_center[1], cfg.domain_center[2]);
    if (cfg.domain_kind == "box")
        return DomainSpec::box(Vector3d(cfg.domain_min[0], cfg.domain_min[1], cfg.domain_min[2]),
                               Vector3d(cfg.domain_max[0], cfg.domain_max[1], cfg.domain_max[2]));
    if (cfg.domain_kind == "ball") return DomainSpec::ball(c, cfg.domain_radius);
    return DomainSpec::ellipsoid(c, Vector3d(cfg.domain_axes[0], cfg.domain_axes[1], cfg.domain_axes[2]));
}

inline CurvatureSpec k_from(const RunConfig& cfg) {
    if (cfg.k_kind == "constant") return constant_k(cfg.k_value);
    return affine_k(cfg.k_value, cfg.k_slope);
}

inline ScalarField phi_from(const RunConfig& cfg) {
    if (cfg.phi_kind == "constant") {
        const double c = cfg.phi_value;
        return ScalarField::analytic([c](const VectorXd&) { return c; },
                                     [](const VectorXd& x) { return VectorXd(VectorXd::Zero(x.size())); },
                                     [](const VectorXd& x) {
                                         return MatrixXd(MatrixXd::Zero(x.size(), x.size()));
                                     });
    }
    if (cfg.phi_kind == "affine") {
        const VectorXd a = Eigen::Map<const VectorXd>(cfg.phi_coeffs.data(), 3);
        const double b = cfg.phi_coeffs[3];
        return ScalarField::analytic([a, b](const VectorXd& x) { return a.dot(x) + b; },
                                     [a](const VectorXd&) { return a; },
                                     [](const VectorXd& x) {
                                         return MatrixXd(MatrixXd::Zero(x.size(), x.size()));
                                     });
    }
    return hemisphere_graph(3, cfg.phi_R);
}

inline SolverConfig solver_config_from(const RunConfig& cfg) {
    SolverConfig sc;
    sc.eps_schedule = cfg.solve_eps_schedule;
    sc.theta = cfg.solve_theta;
    sc.max_outer_iterations = cfg.solve_max_iters;
    sc.residual_tol = cfg.solve_tol;
    sc.linear_tol = cfg.solve_linear_tol;
    sc.gradient_blowup_threshold = cfg.solve_grad_threshold;
    return sc;
}

namespace detail {

struct VerifySuite {
    std::vector<VerifyRow> rows;
    void add(const std::string& name, long samples, double max_error, double tol) {
        rows.push_back({name, samples, max_error, max_error <= tol});
    }
};

inline DefiningFunctionSurface random_ellipsoid(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ax(0.6, 1.8);
    VectorXd axes(2 * n + 2);
    for (Eigen::Index i = 0; i < axes.size(); ++i) axes(i) = ax(rng);
    return ellipsoid_surface(n, axes);
}

}  // namespace detail

/// The identity suite: outer-product structure and eigensystem of A,
/// the n = 1 expansion, the curvature relation, and the catalog curvature
/// values. Writes one CSV row per check; returns 0 iff all rows pass.
inline int run_verify(const RunConfig& cfg, std::ostream& csv, std::ostream& log) {
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    detail::VerifySuite suite;
    const int S = cfg.samples;

    auto random_vec = [&](int d) {
        VectorXd v(d);
        for (int i = 0; i < d; ++i) v(i) = gauss(rng);
        return v;
    };

    {  // J^2 = -I and the symplectic pairing identity
        double e1 = 0.0, e2 = 0.0;
        for (int s = 0; s < S; ++s)
            for (int d : {4, 6, 8}) {
                const VectorXd v = random_vec(d), u = random_vec(d);
                e1 = std::max(e1, (apply_J(apply_J(v)) + v).cwiseAbs().maxCoeff());
                e2 = std::max(e2, std::abs(symplectic_form(v, apply_J(u)) - v.dot(u)));
            }
        suite.add("J_squared_identity", 3L * S, e1, 1e-15);
        suite.add("symplectic_pairing", 3L * S, e2, 1e-12);
    }
    {  // tangency of the Hamiltonian field on random quadratic Hamiltonians
        double e = 0.0;
        for (int s = 0; s < S; ++s) {
            const int n = 1 + (s % 2), d = 2 * n + 2;
            MatrixXd Q = MatrixXd::NullaryExpr(d, d, [&](Eigen::Index, Eigen::Index) { return gauss(rng); });
            Q = ((Q + Q.transpose()) / 2).eval();
            const VectorXd b = random_vec(d);
            HamiltonianSpec H{n, ScalarField::analytic(
                                     [Q, b](const VectorXd& z) { return 0.5 * z.dot(Q * z) + b.dot(z); },
                                     [Q, b](const VectorXd& z) { return VectorXd(Q * z + b); },
                                     [Q](const VectorXd&) { return Q; })};
            const PhasePoint z(random_vec(d), n);
            e = std::max(e, std::abs(hamiltonian_vector_field(H, z).dot(H.field.gradient(z.coords))));
        }
        suite.add("hamiltonian_field_tangency", S, e, 1e-10);
    }
    {  // catalog curvatures, one row per surface and radius
        for (double R : {0.5, 1.0, 2.0}) {
            double es = 0.0, e1 = 0.0, e2 = 0.0;
            long cs = 0;
            for (int n : {1, 2, 3}) {
                HamiltonianSpec H = sphere_hamiltonian(n);
                for (int s = 0; s < S; ++s) {
                    const PhasePoint z(sample_sphere_point(n, R, rng), n);
                    es = std::max(es, std::abs(characteristic_curvature_levelset(H, z) - 1.0 / R));
                    ++cs;
                }
            }
            HamiltonianSpec H1 = cylinder1_hamiltonian(), H2 = cylinder2_hamiltonian();
            for (int s = 0; s < S; ++s) {
                const PhasePoint z1(sample_cylinder1_point(R, rng), 1);
                const PhasePoint z2(sample_cylinder2_point(R, rng), 1);
                e1 = std::max(e1, std::abs(characteristic_curvature_levelset(H1, z1)));
                e2 = std::max(e2, std::abs(characteristic_curvature_levelset(H2, z2) - 1.0 / R));
            }
            const std::string suffix = "_R" + fmt17(R);
            suite.add("curvature_sphere" + suffix, cs, es, 1e-10);
            suite.add("curvature_cylinder1" + suffix, S, e1, 1e-10);
            suite.add("curvature_cylinder2" + suffix, S, e2, 1e-10);
        }
    }
    {  // A(p): block layout vs outer product, trace, spectrum, kernel
        double eblock = 0.0, etrace = 0.0, espec = 0.0, enull = 0.0, eprin = 0.0;
        long cnt = 0;
        for (int d : {3, 5, 7}) {
            const int n = (d - 1) / 2;
            for (int s = 0; s < S; ++s) {
                const VectorXd p = random_vec(d);
                const MatrixXd A = assemble_A(p);
                const VectorXd ux = p.head(n), uy = p.segment(n, n);
                MatrixXd B(d, d);  // the printed block layout
                B.topLeftCorner(n, n) = uy * uy.transpose();
                B.block(0, n, n, n) = -uy * ux.transpose();
                B.block(0, 2 * n, n, 1) = -uy;
                B.block(n, 0, n, n) = -ux * uy.transpose();
                B.block(n, n, n, n) = ux * ux.transpose();
                B.block(n, 2 * n, n, 1) = ux;
                B.block(2 * n, 0, 1, n) = -uy.transpose();
                B.block(2 * n, n, 1, n) = ux.transpose();
                B(2 * n, 2 * n) = 1.0;
                eblock = std::max(eblock, (A - B).cwiseAbs().maxCoeff());
                etrace = std::max(etrace, std::abs(A.trace() - (1.0 + ux.squaredNorm() + uy.squaredNorm())));

                Eigen::SelfAdjointEigenSolver<MatrixXd> eig(A);
                VectorXd expected = VectorXd::Zero(d);
                expected(d - 1) = 1.0 + ux.squaredNorm() + uy.squaredNorm();
                espec = std::max(espec, (eig.eigenvalues() - expected).cwiseAbs().maxCoeff());

                for (const auto& v : null_eigenvectors(p)) enull = std::max(enull, (A * v).cwiseAbs().maxCoeff());
                const auto [evec, eval] = principal_eigenpair(p);
                eprin = std::max(eprin, (A * evec - eval * evec).cwiseAbs().maxCoeff());
                ++cnt;
            }
        }
        suite.add("A_block_vs_outer_product", cnt, eblock, 1e-15);
        suite.add("A_trace_identity", cnt, etrace, 1e-12);
        suite.add("A_spectrum_vs_eigensolver", cnt, espec, 1e-10);
        suite.add("A_null_eigenvectors", cnt, enull, 1e-12);
        suite.add("A_principal_eigenpair", cnt, eprin, 1e-10);
    }
    {  // n = 1 expansion vs trace form
        double e = 0.0;
        for (int s = 0; s < S; ++s) {
            const VectorXd p = random_vec(3);
            MatrixXd L = MatrixXd::NullaryExpr(3, 3, [&](Eigen::Index, Eigen::Index) { return gauss(rng); });
            L = ((L + L.transpose()) / 2).eval();
            const GraphJet jet(p, L);
            e = std::max(e, std::abs(char_operator_value(jet) - char_operator_n1(jet)));
        }
        suite.add("n1_expansion_vs_trace", S, e, 1e-12);
    }
    {  // curvature relation on spheres, cylinders, random ellipsoids
        double esph = 0.0, ecyl = 0.0, eell = 0.0, ehtt = 0.0;
        for (double R : {0.5, 1.0, 2.0})
            for (int n : {1, 2}) {
                DefiningFunctionSurface Ssph = sphere_surface(n, R);
                for (int s = 0; s < 10; ++s) {
                    const VectorXd z = sample_sphere_point(n, R, rng);
                    esph = std::max(esph, std::abs(curvature_relation_residual(Ssph, z)));
                }
            }
        for (double R : {0.5, 1.0, 2.0}) {
            DefiningFunctionSurface c1 = cylinder1_surface(R), c2 = cylinder2_surface(R);
            for (int s = 0; s < 10; ++s) {
                ecyl = std::max(ecyl, std::abs(curvature_relation_residual(c1, sample_cylinder1_point(R, rng))));
                ecyl = std::max(ecyl, std::abs(curvature_relation_residual(c2, sample_cylinder2_point(R, rng))));
            }
        }
        for (int s = 0; s < S; ++s) {
            const int n = 1 + (s % 2);
            DefiningFunctionSurface E = detail::random_ellipsoid(n, rng);
            const VectorXd inv2 = E.f.hessian(VectorXd::Zero(2 * n + 2)).diagonal();
            VectorXd axes = inv2.array().inverse().sqrt();
            const VectorXd z = sample_ellipsoid_point(axes, rng);
            eell = std::max(eell, std::abs(curvature_relation_residual(E, z)));
            const VectorXd T = characteristic_direction(E, z);
            ehtt = std::max(ehtt, std::abs(second_fundamental_form(E, z, T, T) -
                                           surface_characteristic_curvature(E, z)));
        }
        suite.add("curvature_relation_spheres", 60, esph, 1e-10);
        suite.add("curvature_relation_cylinders", 60, ecyl, 1e-10);
        suite.add("curvature_relation_ellipsoids", S, eell, 1e-10);
        suite.add("hTT_equals_characteristic", S, ehtt, 1e-10);
    }
    {  // hemisphere graphs: T u = 1/R at interior points
        double e = 0.0;
        std::uniform_real_distribution<double> unit(-0.5, 0.5);
        for (double R : {0.5, 1.0, 2.0}) {
            const ScalarField u = hemisphere_graph(3, R);
            for (int s = 0; s < S; ++s) {
                Vector3d xi(unit(rng) * R, unit(rng) * R, unit(rng) * R);
                const GraphJet jet(u.gradient(xi), u.hessian(xi));
                e = std::max(e, std::abs(char_operator_value(jet) - 1.0 / R));
            }
        }
        suite.add("hemisphere_graph_operator", 3L * S, e, 1e-10);
    }

    write_verify_csv(suite.rows, csv);
    bool all = true;
    for (const auto& r : suite.rows)
        if (!r.pass) {
            all = false;
            log << "FAIL " << r.check_name << " max_error=" << fmt17(r.max_error) << "\n";
        }
    return all ? 0 : 1;
}

inline int run_trajectory(const RunConfig& cfg, std::ostream& csv, std::ostream& log) {
    const int d = static_cast<int>(cfg.traj_z0.size());
    const int n = (d - 2) / 2;
    HamiltonianSpec H = hamiltonian_from(cfg, n);
    if (H.dim() != d) {
        log << "trajectory.z0 has dimension " << d << " but the surface expects " << H.dim() << "\n";
        return 1;
    }
    try {
        const PhasePoint z0(Eigen::Map<const VectorXd>(cfg.traj_z0.data(), d), n);
        const Trajectory traj = integrate_characteristic_curve(H, z0, cfg.traj_t_end, cfg.traj_dt);
        const std::vector<double> curv = curvature_along_curve(H, traj);
        std::vector<double> hv(traj.size());
        for (std::size_t s = 0; s < traj.size(); ++s) hv[s] = H.field.value(traj.states[s].coords);
        write_trajectory_csv(traj, hv, curv, csv);
        log << "steps=" << traj.size() - 1 << " max_energy_drift=" << fmt17(traj.max_energy_drift) << "\n";
        return 0;
    } catch (const std::exception& e) {
        log << "trajectory failed: " << e.what() << "\n";
        return 1;
    }
}

inline int run_curvature(const RunConfig& cfg, std::ostream& csv, std::ostream& log) {
    DefiningFunctionSurface S = surface_from(cfg);
    std::mt19937_64 rng(cfg.seed);
    csv << "idx";
    for (int i = 0; i < S.dim(); ++i) csv << ",z" << i;
    csv << ",characteristic,mean,levi,relation_residual\n";
    double worst = 0.0;
    for (int s = 0; s < cfg.samples; ++s) {
        const VectorXd z = sample_surface_point(cfg, rng);
        const double C = surface_characteristic_curvature(S, z);
        const double Hm = mean_curvature(S, z);
        const double Lm = levi_mean_curvature(S, z);
        const double res = (2.0 * S.n + 1.0) * Hm - 2.0 * S.n * Lm - C;
        worst = std::max(worst, std::abs(res));
        csv << s;
        for (int i = 0; i < S.dim(); ++i) csv << ',' << fmt17(z(i));
        csv << ',' << fmt17(C) << ',' << fmt17(Hm) << ',' << fmt17(Lm) << ',' << fmt17(res) << '\n';
    }
    log << "max |relation residual| = " << fmt17(worst) << "\n";
    return 0;
}

inline int solve_exit_code(Diagnosis d) {
    switch (d) {
        case Diagnosis::converged: return 0;
        case Diagnosis::gradient_blow_up: return 2;
        case Diagnosis::max_iterations_reached: return 1;
    }
    return 1;
}

inline int run_solve(const RunConfig& cfg, std::ostream& field_csv, std::ostream& report_csv,
                     std::ostream& log, bool probe_mode = false) {
    try {
        const DomainSpec domain = domain_from(cfg);
        const CurvatureSpec k = k_from(cfg);
        GridField grid = build_grid(domain, cfg.solve_h, phi_from(cfg));
        const SolverConfig sc = solver_config_from(cfg);

        const CylinderConditionReport cc = cylinder_condition_check(domain, k);
        switch (cc.status) {
            case CylinderCondition::satisfied:
                log << "cylinder condition: satisfied (min margin " << fmt17(cc.min_margin) << ")\n";
                break;
            case CylinderCondition::violated:
                log << "cylinder condition: violated (min margin " << fmt17(cc.min_margin) << ")\n";
                break;
            case CylinderCondition::unchecked:
                log << "cylinder condition: unchecked\n";
                break;
        }

        auto [field, report] = continuation_solve(std::move(grid), k, sc);
        write_field_csv(field, field_csv);
        write_report_csv(report, report_csv);
        log << "diagnosis: " << to_string(report.diagnosis)
            << " (gradient threshold " << fmt17(report.gradient_threshold) << ")\n";
        if (probe_mode) {
            for (const auto& st : report.stages)
                log << "  eps=" << fmt17(st.eps) << " iters=" << st.iterations
                    << " max_grad=" << fmt17(st.max_grad) << " converged=" << (st.converged ? 1 : 0) << "\n";
            if (cfg.domain_kind == "ball" && cfg.k_kind == "constant")
                log << "  k*R = " << fmt17(cfg.k_value * cfg.domain_radius)
                    << " (Lipschitz solutions require k*R <= 1)\n";
        }
        return solve_exit_code(report.diagnosis);
    } catch (const std::exception& e) {
        log << "solve failed: " << e.what() << "\n";
        return 1;
    }
}

inline int run_counterexample(const RunConfig& cfg, std::ostream& csv, std::ostream& log) {
    const CounterexampleReport rep = counterexample_report(cfg.ce_R, cfg.ce_h);
    csv << "quantity,value\n";
    csv << "R," << fmt17(rep.R) << '\n';
    csv << "h," << fmt17(rep.h) << '\n';
    csv << "max_Tu_deviation," << fmt17(rep.max_Tu_deviation) << '\n';
    csv << "max_Tv_deviation," << fmt17(rep.max_Tv_deviation) << '\n';
    csv << "u_le_v," << (rep.u_le_v ? 1 : 0) << '\n';
    csv << "equality_iff_axis," << (rep.equality_iff_axis ? 1 : 0) << '\n';
    csv << "axis_node_count," << rep.axis_node_count << '\n';
    csv << "du_dnu_at_p," << fmt17(rep.du_dnu_at_p) << '\n';
    csv << "dv_dnu_at_p," << fmt17(rep.dv_dnu_at_p) << '\n';
    csv << "cut_u_lt_v_away_from_p," << (rep.cut_u_lt_v_away_from_p ? 1 : 0) << '\n';
    csv << "verdict," << rep.verdict << '\n';
    log << rep.verdict << "; normal derivatives at p: " << fmt17(rep.du_dnu_at_p) << " vs "
        << fmt17(rep.dv_dnu_at_p) << "\n";
    return 0;
}

/// Runs the configured subcommand, writing outputs under out_dir.
inline int dispatch(const RunConfig& cfg, const std::string& out_dir, std::ostream& log) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    auto open = [&](const char* name) {
        std::ofstream f(fs::path(out_dir) / name, std::ios::binary);
        if (!f) throw std::runtime_error(std::string("cannot open output file ") + name);
        return f;
    };
    if (cfg.subcommand == "verify") {
        auto csv = open("verify.csv");
        return run_verify(cfg, csv, log);
    }
    if (cfg.subcommand == "curvature") {
        auto csv = open("curvature.csv");
        return run_curvature(cfg, csv, log);
    }
    if (cfg.subcommand == "trajectory") {
        auto csv = open("trajectory.csv");
        return run_trajectory(cfg, csv, log);
    }
    if (cfg.subcommand == "solve" || cfg.subcommand == "probe") {
        auto fcsv = open("field.csv");
        auto rcsv = open("report.csv");
        return run_solve(cfg, fcsv, rcsv, log, cfg.subcommand == "probe");
    }
    if (cfg.subcommand == "counterexample") {
        auto csv = open("counterexample.csv");
        return run_counterexample(cfg, csv, log);
    }
    throw config_error("unknown subcommand '" + cfg.subcommand + "'");
}

}  // namespace charcurv
