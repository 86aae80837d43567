#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "splinekit/lsq.hpp"

using namespace splinekit;

namespace {

Eigen::SparseMatrix<double> dense_to_sparse(const Eigen::MatrixXd& A) {
    return A.sparseView();
}

}  // namespace

TEST_CASE("thin-plate energy of analytic splines") {
    SplineSpace space(two_triangle_square(), 3, 1);
    Eigen::SparseMatrix<double> E = energy_matrix(space);
    auto energy = [&](const std::function<double(double, double)>& f) {
        Eigen::VectorXd c = testutil::global_coeffs(space, f);
        return c.dot(E * c);
    };
    CHECK(energy([](double x, double y) { return 3 * x - 2 * y + 1; }) < 1e-12);
    CHECK(energy([](double x, double) { return x * x; }) == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(energy([](double x, double y) { return x * y; }) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("energy root factors the energy matrix") {
    SplineSpace space(square_grid(2), 4, 1);
    Eigen::SparseMatrix<double> E = energy_matrix(space);
    Eigen::SparseMatrix<double> R = energy_root(space);
    Eigen::MatrixXd diff = Eigen::MatrixXd(R.transpose() * R) - Eigen::MatrixXd(E);
    CHECK(diff.lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("energy is zero for degree 1") {
    SplineSpace space(two_triangle_square(), 1, 0);
    CHECK(energy_matrix(space).norm() == 0.0);
}

TEST_CASE("square invertible system solves exactly") {
    Eigen::MatrixXd A(3, 3);
    A << 2, 1, 0, 1, 3, 1, 0, 1, 2;
    Eigen::VectorXd f(3);
    f << 1, 2, 3;
    QuadraticProgram qp;
    qp.n = 3;
    qp.terms.push_back({dense_to_sparse(A), f, 1.0});
    SolveReport rep = solve(qp);
    CHECK((A * rep.c - f).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("minimum norm under one equality matches the Lagrange closed form") {
    // min ||c||^2 s.t. c1 + c2 = 2  ->  c = (1, 1).
    QuadraticProgram qp;
    qp.n = 2;
    qp.terms.push_back({dense_to_sparse(Eigen::MatrixXd::Identity(2, 2)),
                        Eigen::VectorXd::Zero(2), 1.0});
    ConstraintBlock eq;
    eq.rows = 1;
    eq.cols = 2;
    eq.triplets = {{0, 0, 1.0}, {0, 1, 1.0}};
    eq.rhs = Eigen::VectorXd::Constant(1, 2.0);
    qp.equalities.push_back(eq);
    for (SolveMethod m : {SolveMethod::AUG_LAGRANGIAN, SolveMethod::KKT}) {
        qp.options.method = m;
        SolveReport rep = solve(qp);
        CHECK(rep.c[0] == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(rep.c[1] == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(rep.constraint_violation < 1e-8);
    }
}

TEST_CASE("unconstrained least squares matches a dense oracle") {
    std::mt19937 rng(5);
    Eigen::MatrixXd A = Eigen::MatrixXd::Random(60, 20);
    Eigen::VectorXd f = Eigen::VectorXd::Random(60);
    QuadraticProgram qp;
    qp.n = 20;
    qp.terms.push_back({dense_to_sparse(A), f, 1.0});
    SolveReport rep = solve(qp);
    Eigen::VectorXd oracle = A.colPivHouseholderQr().solve(f);
    CHECK((rep.c - oracle).lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("weights scale objective terms correctly") {
    // Two inconsistent one-row terms; the weighted LS answer is the
    // weighted average of the targets.
    Eigen::MatrixXd one = Eigen::MatrixXd::Ones(1, 1);
    QuadraticProgram qp;
    qp.n = 1;
    qp.terms.push_back({dense_to_sparse(one), Eigen::VectorXd::Constant(1, 0.0), 1.0});
    qp.terms.push_back({dense_to_sparse(one), Eigen::VectorXd::Constant(1, 3.0), 3.0});
    SolveReport rep = solve(qp);
    CHECK(rep.c[0] == doctest::Approx(9.0 / 4.0).epsilon(1e-10));
}

TEST_CASE("infeasible equalities raise an error") {
    QuadraticProgram qp;
    qp.n = 1;
    qp.terms.push_back({dense_to_sparse(Eigen::MatrixXd::Identity(1, 1)),
                        Eigen::VectorXd::Zero(1), 1.0});
    ConstraintBlock eq;
    eq.rows = 2;
    eq.cols = 1;
    eq.triplets = {{0, 0, 1.0}, {1, 0, 1.0}};
    eq.rhs.resize(2);
    eq.rhs << 0.0, 1.0;  // c = 0 and c = 1 simultaneously
    qp.equalities.push_back(eq);
    CHECK_THROWS(solve(qp));
}

TEST_CASE("solution does not improve along feasible perturbations") {
    std::mt19937 rng(17);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd A = Eigen::MatrixXd::Random(30, 10);
    Eigen::VectorXd f = Eigen::VectorXd::Random(30);
    Eigen::MatrixXd C = Eigen::MatrixXd::Random(3, 10);
    Eigen::VectorXd g = Eigen::VectorXd::Random(3);
    QuadraticProgram qp;
    qp.n = 10;
    qp.terms.push_back({dense_to_sparse(A), f, 1.0});
    ConstraintBlock eq;
    eq.rows = 3;
    eq.cols = 10;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 10; ++j) eq.triplets.push_back({i, j, C(i, j)});
    eq.rhs = g;
    qp.equalities.push_back(eq);
    SolveReport rep = solve(qp);
    REQUIRE(rep.constraint_violation < 1e-8);
    // Null-space projector of C.
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(10, 10) -
                        C.transpose() * (C * C.transpose()).ldlt().solve(C);
    double obj0 = (A * rep.c - f).squaredNorm();
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::VectorXd dir(10);
        for (int i = 0; i < 10; ++i) dir[i] = gauss(rng);
        Eigen::VectorXd c2 = rep.c + 1e-3 * (P * dir);
        CHECK((A * c2 - f).squaredNorm() >= obj0 - 1e-10);
    }
}

TEST_CASE("augmented Lagrangian converges within three outer iterations") {
    SplineSpace space(square_grid(2), 4, 1);
    ConstraintBlock H = smoothness_matrix(space);
    std::vector<Point2> pts;
    Eigen::VectorXd vals(25);
    int idx = 0;
    for (int j = 0; j < 5; ++j)
        for (int i = 0; i < 5; ++i) {
            pts.push_back({i / 4.0, j / 4.0});
            vals[idx++] = pts.back().x + pts.back().y;
        }
    ConstraintBlock I = interpolation_matrix(space, pts, vals);
    QuadraticProgram qp;
    qp.n = space.n_coeffs();
    qp.terms.push_back({I.to_sparse(), I.rhs, 1.0});
    qp.equalities.push_back(H);
    SolveReport rep = solve(qp);
    CHECK(rep.iterations <= 3);
    CHECK(rep.constraint_violation < 1e-8);
}
