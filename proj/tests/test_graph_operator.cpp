#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>

#include <random>

#include "charcurv/catalog.hpp"
#include "charcurv/graph_operator.hpp"
#include "support.hpp"

using namespace charcurv;
using testsupport::random_symmetric;
using testsupport::random_vector;

namespace {

VectorXd vec3(double a, double b, double c) {
    VectorXd v(3);
    v << a, b, c;
    return v;
}

// the printed block layout of A(Du), assembled independently
MatrixXd block_A(const VectorXd& p) {
    const auto d = p.size();
    const auto n = (d - 1) / 2;
    const VectorXd ux = p.head(n), uy = p.segment(n, n);
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
    return B;
}

}  // namespace

TEST_CASE("sigma examples and norm identity") {
    VectorXd s0 = sigma(VectorXd::Zero(3));
    CHECK(s0(0) == 0.0);
    CHECK(s0(1) == 0.0);
    CHECK(s0(2) == 1.0);

    const VectorXd s = sigma(vec3(1, 1, 5));
    CHECK((s - vec3(-1, 1, 1)).cwiseAbs().maxCoeff() == 0.0);

    std::mt19937_64 rng(41);
    for (int t = 0; t < 200; ++t)
        for (int d : {3, 5, 7}) {
            const int n = (d - 1) / 2;
            const VectorXd p = random_vector(d, rng);
            CHECK(sigma(p).squaredNorm() ==
                  Catch::Approx(1.0 + p.head(2 * n).squaredNorm()).margin(1e-13));
            CHECK(sigma(p)(d - 1) == 1.0);
        }
    CHECK_THROWS_AS(sigma(VectorXd::Ones(4)), dimension_error);
    CHECK_THROWS_AS(sigma(VectorXd::Ones(1)), dimension_error);
}

TEST_CASE("assemble_A examples") {
    const MatrixXd A0 = assemble_A(VectorXd::Zero(3));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(A0(i, j) == ((i == 2 && j == 2) ? 1.0 : 0.0));

    MatrixXd expect(3, 3);
    expect << 1, -1, -1, -1, 1, 1, -1, 1, 1;
    CHECK((assemble_A(vec3(1, 1, 5)) - expect).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("A matches the printed block layout on random gradients") {
    std::mt19937_64 rng(42);
    for (int d : {3, 5, 7})
        for (int t = 0; t < 2000; ++t) {
            const VectorXd p = random_vector(d, rng);
            CHECK((assemble_A(p) - block_A(p)).cwiseAbs().maxCoeff() <= 1e-15);
        }
}

TEST_CASE("trace of A and rank-one structure") {
    std::mt19937_64 rng(43);
    for (int t = 0; t < 200; ++t)
        for (int d : {3, 5, 7}) {
            const int n = (d - 1) / 2;
            const VectorXd p = random_vector(d, rng);
            const MatrixXd A = assemble_A(p);
            CHECK(std::abs(A.trace() - (1.0 + p.head(2 * n).squaredNorm())) < 1e-12);
            CHECK(Eigen::ColPivHouseholderQR<MatrixXd>(A).rank() == 1);
        }
}

TEST_CASE("characteristic operator values") {
    // affine data
    CHECK(char_operator_value(GraphJet(vec3(3, -2, 1), MatrixXd::Zero(3, 3))) == 0.0);

    // hemisphere of radius 2 at the origin: p = 0, Lambda = I/2
    CHECK(char_operator_value(GraphJet(VectorXd::Zero(3), MatrixXd(0.5 * MatrixXd::Identity(3, 3)))) == 0.5);

    // u = -sqrt(R^2 - t^2) at generic interior points
    const ScalarField u = axis_hemisphere_graph(3, 2.0);
    for (double t : {-1.5, -0.3, 0.0, 0.7, 1.9}) {
        const VectorXd xi = vec3(0.4, -5.0, t);  // x, y unconstrained
        const GraphJet jet(u.gradient(xi), u.hessian(xi));
        CHECK(char_operator_value(jet) == Catch::Approx(0.5).margin(1e-12));
    }
}

TEST_CASE("n = 1 expansion equals the trace form") {
    const GraphJet diag(VectorXd::Zero(3), MatrixXd(Eigen::Vector3d(4.0, -7.0, 2.5).asDiagonal()));
    CHECK(char_operator_n1(diag) == 2.5);

    std::mt19937_64 rng(44);
    for (int t = 0; t < 10000; ++t) {
        const GraphJet jet(random_vector(3, rng), random_symmetric(3, rng));
        CHECK(std::abs(char_operator_value(jet) - char_operator_n1(jet)) <= 1e-12);
    }

    const ScalarField u = hemisphere_graph(3, 2.0);
    const VectorXd xi = vec3(0.3, -0.2, 0.5);
    CHECK(char_operator_n1(GraphJet(u.gradient(xi), u.hessian(xi))) == Catch::Approx(0.5).margin(1e-12));

    GraphJet j5(random_vector(5, rng), random_symmetric(5, rng));
    CHECK_THROWS_AS(char_operator_n1(j5), dimension_error);
}

TEST_CASE("null eigenvectors annihilate A and are independent") {
    std::mt19937_64 rng(45);
    const VectorXd p0 = vec3(0.7, -1.2, 9.0);
    const auto vs = null_eigenvectors(p0);
    REQUIRE(vs.size() == 2);
    CHECK((vs[0] - vec3(1, 0, -1.2)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((vs[1] - vec3(0, 1, -0.7)).cwiseAbs().maxCoeff() == 0.0);

    for (int t = 0; t < 200; ++t)
        for (int d : {3, 5, 7}) {
            const int n = (d - 1) / 2;
            const VectorXd p = random_vector(d, rng);
            const MatrixXd A = assemble_A(p);
            const auto null_vs = null_eigenvectors(p);
            REQUIRE(static_cast<int>(null_vs.size()) == 2 * n);
            MatrixXd stack(2 * n, d);
            for (int i = 0; i < 2 * n; ++i) {
                CHECK(std::abs(sigma(p).dot(null_vs[i])) < 1e-13 * (1.0 + p.norm() * p.norm()));
                CHECK((A * null_vs[i]).cwiseAbs().maxCoeff() < 1e-12 * (1.0 + std::pow(p.norm(), 3)));
                stack.row(i) = null_vs[i].transpose();
            }
            CHECK(Eigen::ColPivHouseholderQR<MatrixXd>(stack).rank() == 2 * n);
        }
}

TEST_CASE("principal eigenpair against a full eigensolve") {
    auto [v0, l0] = principal_eigenpair(VectorXd::Zero(3));
    CHECK(l0 == 1.0);
    CHECK((v0 - vec3(0, 0, 1)).cwiseAbs().maxCoeff() == 0.0);

    auto [v1, l1] = principal_eigenpair(vec3(1, 1, 5));
    CHECK(l1 == 3.0);
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(assemble_A(vec3(1, 1, 5)));
    CHECK(eig.eigenvalues()(2) == Catch::Approx(3.0).margin(1e-12));

    std::mt19937_64 rng(46);
    for (int t = 0; t < 300; ++t)
        for (int d : {3, 5, 7}) {
            const VectorXd p = random_vector(d, rng);
            const auto [v, l] = principal_eigenpair(p);
            const MatrixXd A = assemble_A(p);
            CHECK((A * v - l * v).cwiseAbs().maxCoeff() < 1e-10 * (1.0 + l * l));
            Eigen::SelfAdjointEigenSolver<MatrixXd> es(A);
            VectorXd expected = VectorXd::Zero(d);
            expected(d - 1) = l;
            CHECK((es.eigenvalues() - expected).cwiseAbs().maxCoeff() < 1e-10 * (1.0 + l));
        }
}

TEST_CASE("regularized A") {
    std::mt19937_64 rng(47);
    const VectorXd p = random_vector(5, rng);
    CHECK((regularized_A(p, 0.0) - assemble_A(p)).cwiseAbs().maxCoeff() == 0.0);

    const MatrixXd R0 = regularized_A(VectorXd::Zero(3), 0.1);
    CHECK(R0(0, 0) == 0.1);
    CHECK(R0(1, 1) == 0.1);
    CHECK(R0(2, 2) == 1.1);
    CHECK(std::abs(R0(0, 1)) + std::abs(R0(0, 2)) + std::abs(R0(1, 2)) == 0.0);

    for (int t = 0; t < 100; ++t) {
        const MatrixXd Ae = regularized_A(random_vector(7, rng), 1e-4);
        CHECK(Eigen::LLT<MatrixXd>(Ae).info() == Eigen::Success);  // strict positive definiteness
    }
    CHECK_THROWS_AS(regularized_A(p, -1e-8), std::invalid_argument);
}

TEST_CASE("F_value sign convention and linearity in k") {
    const GraphJet affine(vec3(1, 2, 3), MatrixXd::Zero(3, 3));
    CHECK(F_value(vec3(0, 0, 0), 0.0, affine, constant_k(0.0), 0.0) == 0.0);

    const double R = 2.0;
    const ScalarField u = hemisphere_graph(3, R);
    const VectorXd xi = vec3(0.5, 0.1, -0.4);
    const GraphJet jet(u.gradient(xi), u.hessian(xi));
    CHECK(F_value(xi, u.value(xi), jet, constant_k(1.0 / R), 0.0) == Catch::Approx(0.0).margin(1e-13));
    const double delta = 0.37;
    CHECK(F_value(xi, u.value(xi), jet, constant_k(1.0 / R + delta), 0.0) ==
          Catch::Approx(delta).margin(1e-13));
}

TEST_CASE("degenerate ellipticity in the Hessian slot") {
    std::mt19937_64 rng(48);
    for (int t = 0; t < 200; ++t) {
        const VectorXd p = random_vector(3, rng);
        const MatrixXd L1 = random_symmetric(3, rng);
        const MatrixXd G = MatrixXd::NullaryExpr(3, 3, [&](Eigen::Index, Eigen::Index) {
            std::normal_distribution<double> gauss;
            return gauss(rng);
        });
        const MatrixXd L2 = L1 + G * G.transpose();  // L2 >= L1
        for (double eps : {0.0, 1e-4, 0.1}) {
            const double F1 = F_value(vec3(0, 0, 0), 0.0, GraphJet(p, L1), constant_k(0.0), eps);
            const double F2 = F_value(vec3(0, 0, 0), 0.0, GraphJet(p, L2), constant_k(0.0), eps);
            CHECK(F1 >= F2 - 1e-12 * (1.0 + std::abs(F1)));
        }
    }
}

TEST_CASE("GraphJet symmetrizes its Hessian") {
    MatrixXd L(3, 3);
    L << 1, 2, 3, 2 + 1e-13, 5, 6, 3 - 1e-13, 6, 9;
    const GraphJet jet(vec3(0, 0, 0), L);
    CHECK((jet.lambda() - jet.lambda().transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(GraphJet(VectorXd::Ones(4), MatrixXd::Zero(4, 4)), dimension_error);
    CHECK_THROWS_AS(GraphJet(vec3(0, 0, 0), MatrixXd::Zero(2, 2)), dimension_error);
}

TEST_CASE("monotonicity spot checks") {
    std::vector<VectorXd> xs = {vec3(0, 0, 0), vec3(1, -1, 2)};
    CHECK(spot_check_monotonicity(constant_k(0.3), xs, -2.0, 2.0));
    CHECK(spot_check_monotonicity(affine_k(0.1, 0.5), xs, -2.0, 2.0));

    CurvatureSpec bad;
    bad.k = [](const VectorXd&, double r) { return -r; };
    bad.monotonicity = CurvatureSpec::Monotonicity::strictly_increasing_in_r;
    CHECK_FALSE(spot_check_monotonicity(bad, xs, -2.0, 2.0));

    CurvatureSpec xdep;
    xdep.k = [](const VectorXd& x, double) { return x(0); };
    xdep.monotonicity = CurvatureSpec::Monotonicity::nondecreasing_r_x_free;
    CHECK_FALSE(spot_check_monotonicity(xdep, xs, -2.0, 2.0));
}
