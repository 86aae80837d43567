#pragma once

#include <array>
#include <vector>

#include "splinekit/mesh.hpp"

namespace splinekit::quadrature {

struct QuadPoint {
    Point2 p;
    double w = 0;  // includes triangle area
};

/// Gauss-Legendre nodes/weights on [0,1].
void gauss_legendre01(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Quadrature on a triangle exact for polynomials of total degree <= deg,
/// built from a Duffy-collapsed tensor Gauss rule.
std::vector<QuadPoint> triangle_rule(const std::array<Point2, 3>& v, int deg);

}  // namespace splinekit::quadrature
