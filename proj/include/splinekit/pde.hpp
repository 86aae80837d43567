#pragma once

#include "splinekit/fit.hpp"
#include "splinekit/lsq.hpp"
#include "splinekit/targets.hpp"

namespace splinekit {

/// Second-order elliptic problem in non-divergence form:
///   a11 u_xx + 2 a12 u_xy + a22 u_yy + b1 u_x + b2 u_y + c0 u = f in Omega,
///   u = g on the boundary.
struct EllipticProblem {
    ScalarField a11, a12, a22;
    ScalarField b1, b2, c0;
    ScalarField f;
    ScalarField g;

    /// -Delta u = f convention: a11 = a22 = -1.
    static EllipticProblem poisson(ScalarField f, ScalarField g);
};

struct CollocationPoint {
    Point2 p;
    int triangle = -1;
    bform::Bary bary;
};

/// Interior domain points of degree Dprime over all triangles, deduplicated
/// across shared edges/vertices; points on the domain boundary excluded.
std::vector<CollocationPoint> collocation_points(const SplineSpace& space, int Dprime);

/// Spot-check ellipticity a11*a22 - a12^2 > 0 at random domain points.
bool check_ellipticity(const SplineSpace& space, const EllipticProblem& problem,
                       unsigned seed = 12345);

std::pair<Eigen::SparseMatrix<double>, Eigen::VectorXd> assemble_collocation(
    const SplineSpace& space, const EllipticProblem& problem, int Dprime);

struct EllipticSolution {
    Spline s;
    SolveReport report;  // epsilon1 = L2 norm of (Delta s + f) when Poisson-like
};

EllipticSolution solve_elliptic(std::shared_ptr<const SplineSpace> space,
                                const EllipticProblem& problem, int Dprime = -1,
                                const SolveOptions& opts = {});

struct ConvergenceRow {
    double mesh_size = 0;
    double l2_error = 0;
    double grad_l2_error = 0;
    double rmse = 0;
    double max_error = 0;
    double epsilon1 = 0;
};

struct ConvergenceResult {
    std::vector<ConvergenceRow> rows;
    bool exact = false;      // all levels at machine accuracy
    double l2_rate = 0;      // log-log least-squares slopes
    double grad_rate = 0;
};

/// Grid errors of a spline against a reference field: RMSE and max over the
/// in-domain points of a grid_n x grid_n bounding-box grid.
std::pair<double, double> grid_errors(const Spline& s, const ScalarField& exact, int grid_n);

/// L2 norms of (s - u) and grad(s - u) via per-triangle Gauss quadrature.
std::pair<double, double> quadrature_errors(const Spline& s, const targets::Target& exact);

ConvergenceResult convergence_study(const Triangulation& base, int d, int r,
                                    const targets::Target& exact, int levels, int Dprime = -1,
                                    int grid_n = 201);

}  // namespace splinekit
