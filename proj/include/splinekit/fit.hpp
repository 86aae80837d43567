#pragma once

#include <memory>
#include <string>
#include <vector>

#include "splinekit/lsq.hpp"

namespace splinekit {

struct Spline {
    std::shared_ptr<const SplineSpace> space;
    Eigen::VectorXd c;
    bool certified = false;              // ||H c||_inf <= 1e-8
    double smoothness_violation = 0.0;

    double eval(const Point2& p) const;          // throws outside the domain
    double eval_or_nan(const Point2& p) const;   // NaN outside
    double eval_at(int triangle, const bform::Bary& b) const;
};

std::shared_ptr<const SplineSpace> make_space(Triangulation tri, int d, int r);

Spline make_spline(std::shared_ptr<const SplineSpace> space, Eigen::VectorXd c);

void save_coeffs(const Spline& s, const std::string& path);
Eigen::VectorXd load_coeffs(const SplineSpace& space, const std::string& path);

/// min sum |s(x_i,y_i) - z_i|^2 + lambda E2(s)  s.t.  H c = 0.
Spline fit_penalized(std::shared_ptr<const SplineSpace> space, const std::vector<Point2>& points,
                     const Eigen::VectorXd& values, double lambda,
                     const SolveOptions& opts = {});

/// min E2(s)  s.t.  I c = f, H c = 0.
Spline interpolate_min_energy(std::shared_ptr<const SplineSpace> space,
                              const std::vector<Point2>& points, const Eigen::VectorXd& values,
                              const SolveOptions& opts = {});

struct LevelSetProblem {
    std::vector<Point2> cloud;           // target 1
    std::vector<Point2> outer_boundary;  // target 0
    std::vector<Point2> hole_boundaries; // target 2
    double lambda = 1.0;
};

/// Penalized fit with the three target sets; the curve of interest is the
/// level-1 set of the result.
Spline solve_levelset(const LevelSetProblem& problem, std::shared_ptr<const SplineSpace> space,
                      const SolveOptions& opts = {});

struct Polyline {
    std::vector<Point2> points;
    bool closed = false;
};

/// Marching squares on a grid_n x grid_n sampling over the mesh bounding
/// box; cells touching OUTSIDE samples are skipped. Oriented with the
/// above-level region on the left.
std::vector<Polyline> extract_contour(const Spline& s, double level, int grid_n);

/// Values on the grid_n x grid_n bounding-box grid, NaN outside the mesh.
Eigen::MatrixXd sample_grid(const Spline& s, int grid_n);

void write_contours_csv(const std::vector<Polyline>& curves, const std::string& path);
void write_grid_csv(const Eigen::MatrixXd& grid, const std::string& path);

}  // namespace splinekit
