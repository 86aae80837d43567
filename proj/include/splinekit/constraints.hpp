#pragma once

#include <Eigen/Sparse>
#include <functional>
#include <string>

#include "splinekit/bform.hpp"
#include "splinekit/mesh.hpp"

namespace splinekit {

/// S^r_d(tri): the discontinuous coefficient space plus the smoothness
/// constraints that carve out the C^r subspace.
struct SplineSpace {
    Triangulation tri;
    EdgeTable edge_table;
    int d = 1;
    int r = -1;

    SplineSpace() = default;
    SplineSpace(Triangulation t, int degree, int smoothness);

    int local_count() const { return bform::coeff_count(d); }
    int n_coeffs() const { return tri.triangle_count() * local_count(); }
    int global_index(int t, int local) const { return t * local_count() + local; }
};

enum class BlockLabel { SMOOTHNESS, INTERP, BOUNDARY };

struct ConstraintBlock {
    std::vector<Eigen::Triplet<double>> triplets;
    Eigen::VectorXd rhs;
    int rows = 0;
    int cols = 0;
    BlockLabel label = BlockLabel::SMOOTHNESS;

    Eigen::SparseMatrix<double> to_sparse() const;
};

/// Cross-edge C^r conditions stacked over all interior edges; H c = 0 iff
/// the piecewise polynomial is C^r. Empty for r = -1.
ConstraintBlock smoothness_matrix(const SplineSpace& space);

ConstraintBlock interpolation_matrix(const SplineSpace& space, const std::vector<Point2>& points,
                                     const Eigen::VectorXd& values);

using ScalarField = std::function<double(double, double)>;

/// Dirichlet rows at equally spaced points per boundary edge, corner points
/// deduplicated. samples_per_edge defaults to d+1 (the edge domain points).
ConstraintBlock boundary_matrix(const SplineSpace& space, const ScalarField& g,
                                int samples_per_edge = -1);

void write_matrix_market(const ConstraintBlock& block, const std::string& path);

}  // namespace splinekit
