#pragma once

#include <Eigen/Dense>
#include <functional>

#include "splinekit/bform.hpp"
#include "splinekit/constraints.hpp"

namespace testutil {

using splinekit::Point2;

/// Local B-form coefficients of f by interpolation at the domain points;
/// exact when f is a polynomial of degree <= d.
inline Eigen::VectorXd local_coeffs(int d, const std::array<Point2, 3>& v,
                                    const std::function<double(double, double)>& f) {
    namespace bf = splinekit::bform;
    auto pts = bf::domain_points(d, v);
    int n = bf::coeff_count(d);
    Eigen::MatrixXd V(n, n);
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) {
        V.row(i) = bf::eval_basis_row(d, bf::barycentric(v, pts[i]));
        rhs[i] = f(pts[i].x, pts[i].y);
    }
    return V.fullPivLu().solve(rhs);
}

/// Stacked per-triangle coefficients of a global function.
inline Eigen::VectorXd global_coeffs(const splinekit::SplineSpace& space,
                                     const std::function<double(double, double)>& f) {
    Eigen::VectorXd c(space.n_coeffs());
    for (int t = 0; t < space.tri.triangle_count(); ++t)
        c.segment(space.global_index(t, 0), space.local_count()) =
            local_coeffs(space.d, space.tri.corners(t), f);
    return c;
}

/// Largest cross-edge jump in the value and Cartesian derivatives up to
/// total order max_order, sampled at n interior points of every interior
/// edge.
inline double max_edge_jump(const splinekit::SplineSpace& space, const Eigen::VectorXd& c,
                            int max_order, int n_samples) {
    namespace bf = splinekit::bform;
    std::vector<std::pair<int, int>> orders;
    for (int total = 0; total <= max_order; ++total)
        for (int px = total; px >= 0; --px) orders.push_back({px, total - px});
    double worst = 0;
    for (const auto& e : space.edge_table.edges) {
        if (!e.interior()) continue;
        const Point2& pa = space.tri.vertices[e.a];
        const Point2& pb = space.tri.vertices[e.b];
        for (int s = 1; s <= n_samples; ++s) {
            double t = double(s) / (n_samples + 1);
            Point2 p{pa.x + t * (pb.x - pa.x), pa.y + t * (pb.y - pa.y)};
            double vals[2][21];
            int side = 0;
            for (int tri : {e.left, e.right}) {
                auto verts = space.tri.corners(tri);
                auto b = bf::barycentric(verts, p);
                auto rows = bf::derivative_rows(space.d, verts, b, orders);
                Eigen::VectorXd local = c.segment(space.global_index(tri, 0), space.local_count());
                for (size_t k = 0; k < orders.size(); ++k) vals[side][k] = rows[k].dot(local);
                ++side;
            }
            for (size_t k = 0; k < orders.size(); ++k)
                worst = std::max(worst, std::abs(vals[0][k] - vals[1][k]));
        }
    }
    return worst;
}

}  // namespace testutil
