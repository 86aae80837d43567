#include "splinekit/dimension.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace splinekit {

namespace {

int choose2(int n) { return n < 2 ? 0 : n * (n - 1) / 2; }

// Edge direction as an angle in [0, pi).
double slope_angle(const Triangulation& tri, const Edge& e) {
    double ang = std::atan2(tri.vertices[e.b].y - tri.vertices[e.a].y,
                            tri.vertices[e.b].x - tri.vertices[e.a].x);
    while (ang < 0) ang += M_PI;
    while (ang >= M_PI) ang -= M_PI;
    return ang;
}

bool same_slope(double a, double b, double tol) {
    double diff = std::abs(a - b);
    diff = std::min(diff, M_PI - diff);
    return diff < tol;
}

int count_distinct(const std::vector<double>& angles, double tol) {
    std::vector<double> seen;
    for (double a : angles) {
        bool found = false;
        for (double s : seen)
            if (same_slope(a, s, tol)) { found = true; break; }
        if (!found) seen.push_back(a);
    }
    return static_cast<int>(seen.size());
}

int sigma_of(int d, int r, int m) {
    int s = 0;
    for (int j = 1; j <= d - r; ++j) s += std::max(0, r + j + 1 - j * m);
    return s;
}

}  // namespace

DimensionReport schumaker_bounds(const SplineSpace& space, double slope_tol) {
    const int d = space.d, r = space.r;
    if (r < 0 || r > d) throw std::invalid_argument("schumaker_bounds: requires 0 <= r <= d");
    const auto& et = space.edge_table;
    const auto& tri = space.tri;
    const int EI = et.interior_edge_count();
    const int VI = et.interior_vertex_count();

    DimensionReport rep;
    rep.D = choose2(d + 2) + choose2(d - r + 1) * EI - (choose2(d + 2) - choose2(r + 2)) * VI;

    // Interior vertices in index order; that order also fixes sigma_tilde:
    // an edge joining two interior vertices is considered at the one with
    // the smaller index and skipped at the other.
    for (int v = 0; v < tri.vertex_count(); ++v)
        if (!et.vertex_on_boundary[v]) rep.interior_vertices.push_back(v);

    std::vector<bool> is_interior(tri.vertex_count(), false);
    for (int v : rep.interior_vertices) is_interior[v] = true;

    int sum_sigma = 0, sum_sigma_tilde = 0;
    for (int v : rep.interior_vertices) {
        std::vector<double> all_angles, fresh_angles;
        std::vector<int> eids = et.vertex_edges[v];
        std::sort(eids.begin(), eids.end(), [&](int i, int j) {
            return slope_angle(tri, et.edges[i]) < slope_angle(tri, et.edges[j]);
        });
        for (int ei : eids) {
            const Edge& e = et.edges[ei];
            double ang = slope_angle(tri, e);
            all_angles.push_back(ang);
            int other = e.a == v ? e.b : e.a;
            if (!(is_interior[other] && other < v)) fresh_angles.push_back(ang);
        }
        int m = count_distinct(all_angles, slope_tol);
        int mt = count_distinct(fresh_angles, slope_tol);
        int s = sigma_of(d, r, m);
        int st = sigma_of(d, r, mt);
        rep.sigma.push_back(s);
        rep.sigma_tilde.push_back(st);
        sum_sigma += s;
        sum_sigma_tilde += st;
    }
    rep.lower = rep.D + sum_sigma;
    rep.upper = rep.D + sum_sigma_tilde;
    return rep;
}

int dim_via_rank(const SplineSpace& space) {
    const int n = space.n_coeffs();
    if (n > 20000) throw std::runtime_error("dim_via_rank: problem too large (> 20000 columns)");
    if (space.r < 0) return n;
    ConstraintBlock H = smoothness_matrix(space);
    if (H.rows == 0) return n;
    Eigen::MatrixXd Hd = Eigen::MatrixXd(H.to_sparse());
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Hd);
    qr.setThreshold(1e-9);
    return n - static_cast<int>(qr.rank());
}

}  // namespace splinekit
