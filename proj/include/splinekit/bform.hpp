#pragma once

#include <Eigen/Dense>
#include <array>
#include <utility>
#include <vector>

#include "splinekit/mesh.hpp"

namespace splinekit::bform {

constexpr int kMaxDegree = 18;

struct MultiIndex {
    int a1 = 0, a2 = 0, a3 = 0;
};

struct Bary {
    double b1 = 0, b2 = 0, b3 = 0;
};

/// C(d+2, 2), the number of B-form coefficients on one triangle.
int coeff_count(int d);

/// Canonical coefficient order: lexicographically decreasing on (a1, a2).
const std::vector<MultiIndex>& multi_indices(int d);
int mi_index(int d, int a1, int a2);

Bary barycentric(const std::array<Point2, 3>& v, const Point2& p);
Point2 from_barycentric(const std::array<Point2, 3>& v, const Bary& b);

/// Domain points xi_alpha = (a1 v1 + a2 v2 + a3 v3)/d in canonical order.
std::vector<Point2> domain_points(int d, const std::array<Point2, 3>& v);

/// de Casteljau evaluation of a local B-form polynomial.
double eval_bform(int d, const Eigen::VectorXd& coeffs, const Bary& b);

/// Row of Bernstein basis values B^d_alpha(b), canonical order. Sums to 1.
Eigen::RowVectorXd eval_basis_row(int d, const Bary& b);

/// Degree-lowering map for a directional derivative along Cartesian
/// direction u: maps degree-d coefficients to the degree-(d-1) coefficients
/// of D_u s. Size C(d+1,2) x C(d+2,2).
Eigen::MatrixXd directional_reduction(int d, const std::array<Point2, 3>& v, double ux, double uy);

/// Rows mapping local coefficients to Cartesian partial derivatives
/// (dx^px dy^py with px+py <= 2) at barycentric point b.
std::vector<Eigen::RowVectorXd> derivative_rows(int d, const std::array<Point2, 3>& v,
                                                const Bary& b,
                                                const std::vector<std::pair<int, int>>& orders);

/// Exact Gram matrix int_T B^d_alpha B^d_beta via the closed form
///   area(T) * prod_i C(a_i+b_i, a_i) / (C(2d,d) * C(2d+2,2)).
Eigen::MatrixXd product_integral_matrix(int d, const std::array<Point2, 3>& v);

}  // namespace splinekit::bform
